use rayon::prelude::*;
use serde::Serialize;

use super::Check;
use crate::error::{check_dim, Error, Result};
use crate::graph_model::Partition;
use crate::linalg::ops::distance;
use crate::linalg::{top_k_eigs, EigOptions, EigenBasis, SymMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    /// `‖P Ĝ_u − G_u‖` with `P` the top-k projector of `Ĝ`.
    pub eps: Vec<f64>,
    /// `‖P E_u‖`.
    pub noise: Vec<f64>,
    /// `‖(P − I) G_u‖`.
    pub dev: Vec<f64>,
    pub delta: f64,
    pub max_intra: f64,
    pub min_inter: f64,
    /// `min_inter / max_intra`; infinite when `max_intra = 0`.
    pub separation_ratio: f64,
    pub eps_max: f64,
    /// `0.1 (p − q) √(n/k)`.
    pub eps_target: f64,
    /// Fraction of vertices with `eps(u) ≤ eps_target`.
    pub eps_within_target: f64,
    /// `min_u noise(u) + dev(u) − eps(u)`.
    pub triangle_slack: f64,
    /// `min_{u,v} eps(u) + eps(v) − |‖ρ(u) − ρ(v)‖ − ‖G_u − G_v‖|`.
    pub chain_slack: f64,
    pub tolerance: f64,
}

impl DecompositionReport {
    /// Same-cluster pairs within `Δ/4` and different-cluster pairs at least `Δ` apart.
    pub fn clear_cut(&self) -> bool {
        self.max_intra <= self.delta / 4.0 && self.min_inter >= self.delta
    }
}

impl Check for DecompositionReport {
    fn margins(&self) -> Vec<(String, f64)> {
        vec![
            ("triangle".into(), self.triangle_slack + self.tolerance),
            ("chain".into(), self.chain_slack + self.tolerance),
        ]
    }
}

/// [`decomposition_report_with_basis`] with the top-k basis of `Ĝ`
/// computed here, `k` taken from the partition.
pub fn decomposition_report(
    g_hat: &SymMatrix,
    g: &SymMatrix,
    partition: &Partition,
    p: f64,
    q: f64,
    opts: &EigOptions,
    tolerance: f64,
) -> Result<DecompositionReport> {
    let basis = top_k_eigs(g_hat, partition.k(), opts)?;
    decomposition_report_with_basis(g_hat, g, partition, p, q, &basis, tolerance)
}

/// Per-vertex split of the embedding error into noise and deviation, plus
/// the embedded intra/inter distance extremes. `g` must be the mean matrix
/// of `partition`, so its columns depend only on the cluster.
pub fn decomposition_report_with_basis(
    g_hat: &SymMatrix,
    g: &SymMatrix,
    partition: &Partition,
    p: f64,
    q: f64,
    basis: &EigenBasis,
    tolerance: f64,
) -> Result<DecompositionReport> {
    let n = g.n();
    check_dim(n, g_hat.n())?;
    check_dim(n, partition.n())?;
    check_dim(n, basis.n())?;
    let k = basis.k();
    if k == 0 {
        return Err(Error::InvalidParameters("empty basis".into()));
    }
    let hat_c = g_hat.mul_block(&basis.vectors)?;
    let mean_c = g.mul_block(&basis.vectors)?;
    let v = &basis.vectors;
    let coords = |c: &crate::linalg::Block, u: usize| -> Vec<f64> { (0..k).map(|i| c.get(u, i)).collect() };
    let hat_coords: Vec<Vec<f64>> = (0..n).map(|u| coords(&hat_c, u)).collect();

    let per_vertex: Vec<(f64, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let ch = &hat_coords[u];
            let cm = coords(&mean_c, u);
            let gu = g.column(u);
            let ambient = |c: &[f64]| -> Vec<f64> {
                (0..n)
                    .map(|w| (0..k).map(|i| v.get(w, i) * c[i]).sum::<f64>())
                    .collect()
            };
            let eps = distance(&ambient(ch), gu);
            let noise = distance(ch, &cm);
            let dev = distance(&ambient(&cm), gu);
            (eps, noise, dev)
        })
        .collect();
    let eps: Vec<f64> = per_vertex.iter().map(|t| t.0).collect();
    let noise: Vec<f64> = per_vertex.iter().map(|t| t.1).collect();
    let dev: Vec<f64> = per_vertex.iter().map(|t| t.2).collect();

    // Column differences of G per cluster pair, from one representative each.
    let kc = partition.k();
    let reps: Vec<Option<usize>> = (0..kc).map(|l| partition.members(l).first().copied()).collect();
    let mut col_dist = vec![0.0; kc * kc];
    for a in 0..kc {
        for b in 0..kc {
            if let (Some(x), Some(y)) = (reps[a], reps[b]) {
                col_dist[a * kc + b] = distance(g.column(x), g.column(y));
            }
        }
    }

    let labels = partition.assignment();
    let (max_intra, min_inter, chain_slack) = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut acc = (0.0f64, f64::INFINITY, f64::INFINITY);
            for w in u + 1..n {
                let d = distance(&hat_coords[u], &hat_coords[w]);
                if labels[u] == labels[w] {
                    acc.0 = acc.0.max(d);
                } else {
                    acc.1 = acc.1.min(d);
                }
                let gd = col_dist[labels[u] * kc + labels[w]];
                acc.2 = acc.2.min(eps[u] + eps[w] - (d - gd).abs());
            }
            acc
        })
        .reduce(
            || (0.0, f64::INFINITY, f64::INFINITY),
            |x, y| (x.0.max(y.0), x.1.min(y.1), x.2.min(y.2)),
        );

    let scale = (p - q) * (n as f64 / kc as f64).sqrt();
    let eps_target = 0.1 * scale;
    let eps_max = eps.iter().copied().fold(0.0, f64::max);
    let within = eps.iter().filter(|&&e| e <= eps_target).count();
    let triangle_slack = (0..n)
        .map(|u| noise[u] + dev[u] - eps[u])
        .fold(f64::INFINITY, f64::min);
    Ok(DecompositionReport {
        delta: 0.8 * scale,
        max_intra,
        min_inter,
        separation_ratio: if max_intra == 0.0 {
            f64::INFINITY
        } else {
            min_inter / max_intra
        },
        eps_max,
        eps_target,
        eps_within_target: within as f64 / n as f64,
        triangle_slack,
        chain_slack,
        tolerance,
        eps,
        noise,
        dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::{mean_matrix, sample_adjacency};

    #[test]
    fn noise_free_has_zero_error() {
        let part = Partition::from_sizes(&[6, 4, 5]);
        let g = mean_matrix(&part, 0.7, 0.2);
        let opts = EigOptions {
            tol: 1e-12,
            ..EigOptions::default()
        };
        let r = decomposition_report(&g, &g, &part, 0.7, 0.2, &opts, 1e-9).unwrap();
        for u in 0..15 {
            assert!(r.eps[u] < 1e-9 && r.noise[u] < 1e-9 && r.dev[u] < 1e-9, "{} {} {}", r.eps[u], r.noise[u], r.dev[u]);
        }
        assert!(r.passed());
        assert_eq!(r.eps_within_target, 1.0);
    }

    #[test]
    fn disconnected_blocks_separate_infinitely() {
        let part = Partition::from_sizes(&[4, 4]);
        let g = mean_matrix(&part, 1.0, 0.0);
        let r = decomposition_report(&g, &g, &part, 1.0, 0.0, &EigOptions::default(), 1e-9).unwrap();
        assert!(r.max_intra < 1e-12 || r.separation_ratio > 1e6);
        assert!((r.min_inter - 8f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn sampled_instance_satisfies_triangle() {
        let part = Partition::from_sizes(&[30, 30]);
        let g = mean_matrix(&part, 0.6, 0.1);
        let g_hat = sample_adjacency(&part, 0.6, 0.1, 17);
        let r = decomposition_report(&g_hat, &g, &part, 0.6, 0.1, &EigOptions::default(), 1e-9)
            .unwrap();
        assert!(r.passed(), "{:?}", r.margins());
        assert!(r.eps.iter().all(|e| e.is_finite()));
    }
}
