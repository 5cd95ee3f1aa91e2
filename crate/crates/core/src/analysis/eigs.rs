use serde::Serialize;

use super::{Check, ToleranceConfig};
use crate::error::{check_dim, Error, Result};
use crate::graph_model::Partition;
use crate::linalg::spectrum::small_symmetric_eigen;
use crate::linalg::{dense_eig_oracle, top_k_eigs, EigOptions, SymMatrix, ORACLE_MAX_N};

#[derive(Clone, Debug, Serialize)]
pub struct EigStructureReport {
    /// `λ_1 ≥ … ≥ λ_k` of `G`.
    pub lambdas: Vec<f64>,
    /// Cluster sizes, descending.
    pub sizes: Vec<usize>,
    /// `δ_i = λ_i − (p − q) s_i`.
    pub deltas: Vec<f64>,
    pub delta_sum: f64,
    pub nq: f64,
    /// `n q + (p − q) n / k`.
    pub lambda1_lower: f64,
    pub tolerances: ToleranceConfig,
}

impl Check for EigStructureReport {
    fn margins(&self) -> Vec<(String, f64)> {
        let t = &self.tolerances;
        let min_delta = self.deltas.iter().copied().fold(f64::INFINITY, f64::min);
        let sum_slack = t.delta_sum_rel * self.nq.max(1.0);
        vec![
            ("delta_min".into(), min_delta + t.delta_floor),
            ("delta_sum".into(), sum_slack - (self.delta_sum - self.nq).abs()),
            (
                "lambda1_lower".into(),
                self.lambdas[0] - self.lambda1_lower + t.lambda1_abs,
            ),
        ]
    }
}

/// Top-k eigenvalues of the mean matrix against the cluster sizes.
///
/// Uses the Jacobi oracle for `n ≤ ORACLE_MAX_N` and subspace iteration
/// beyond; `G` has rank `k` so the iteration converges at once.
pub fn eig_structure_report(
    g: &SymMatrix,
    partition: &Partition,
    p: f64,
    q: f64,
    tolerances: &ToleranceConfig,
) -> Result<EigStructureReport> {
    let n = g.n();
    check_dim(n, partition.n())?;
    let k = partition.k();
    if !(p > q) {
        return Err(Error::InvalidParameters(format!("need p > q, got p = {p}, q = {q}")));
    }
    let lambdas = if n <= ORACLE_MAX_N {
        dense_eig_oracle(g)?.values[..k].to_vec()
    } else {
        top_k_eigs(g, k, &EigOptions::default())?.values
    };
    let mut sizes = partition.sizes().to_vec();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let deltas: Vec<f64> = lambdas
        .iter()
        .zip(&sizes)
        .map(|(&l, &s)| l - (p - q) * s as f64)
        .collect();
    let nf = n as f64;
    Ok(EigStructureReport {
        delta_sum: deltas.iter().sum(),
        nq: nf * q,
        lambda1_lower: nf * q + (p - q) * nf / k as f64,
        lambdas,
        sizes,
        deltas,
        tolerances: *tolerances,
    })
}

/// Nonzero eigenvalues of the mean matrix, descending, from the reduced
/// `k × k` problem `S^{1/2} ((p − q) I + q 11ᵀ) S^{1/2}`.
pub fn mean_eigenvalues(partition: &Partition, p: f64, q: f64) -> Vec<f64> {
    let k = partition.k();
    let roots: Vec<f64> = partition.sizes().iter().map(|&s| (s as f64).sqrt()).collect();
    let mut t = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            let b = if i == j { p } else { q };
            t[i * k + j] = roots[i] * b * roots[j];
        }
    }
    small_symmetric_eigen(&t, k).0
}

#[derive(Clone, Debug, Serialize)]
pub struct RankOneReport {
    /// Weights `μ_i` with `d̃_i = d_i + ρ μ_i`, both sorted descending.
    pub weights: Vec<f64>,
    pub weight_sum: f64,
    pub tolerance: f64,
}

impl Check for RankOneReport {
    fn margins(&self) -> Vec<(String, f64)> {
        let lo = self.weights.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        vec![
            ("weight_min".into(), lo + self.tolerance),
            ("weight_max".into(), 1.0 + self.tolerance - hi),
            ("weight_sum".into(), self.tolerance - (self.weight_sum - 1.0).abs()),
        ]
    }
}

/// Eigenvalues of `D + ρ z zᵀ` for diagonal `D`, unit `z` and `ρ > 0`,
/// expressed as weights relative to the sorted diagonal.
pub fn rank_one_check(d: &[f64], rho: f64, z: &[f64], tolerance: f64) -> Result<RankOneReport> {
    check_dim(d.len(), z.len())?;
    if !(rho > 0.0) {
        return Err(Error::InvalidParameters(format!("rho must be positive, got {rho}")));
    }
    let n = d.len();
    let m = SymMatrix::from_upper_fn(n, |i, j| {
        let diag = if i == j { d[i] } else { 0.0 };
        diag + rho * z[i] * z[j]
    });
    let perturbed = dense_eig_oracle(&m)?.values;
    let mut sorted = d.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let weights: Vec<f64> = perturbed
        .iter()
        .zip(&sorted)
        .map(|(t, s)| (t - s) / rho)
        .collect();
    Ok(RankOneReport {
        weight_sum: weights.iter().sum(),
        weights,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::mean_matrix;

    #[test]
    fn two_equal_clusters() {
        let part = Partition::from_sizes(&[4, 4]);
        let g = mean_matrix(&part, 0.8, 0.2);
        let r = eig_structure_report(&g, &part, 0.8, 0.2, &ToleranceConfig::default()).unwrap();
        assert!((r.lambdas[0] - 4.0).abs() < 1e-10);
        assert!((r.lambdas[1] - 2.4).abs() < 1e-10);
        assert!((r.deltas[0] - 1.6).abs() < 1e-10);
        assert!(r.deltas[1].abs() < 1e-10);
        assert!((r.delta_sum - 1.6).abs() < 1e-10);
        assert!(r.passed());
    }

    #[test]
    fn no_inter_edges_means_no_shift() {
        let part = Partition::from_sizes(&[3, 5, 2]);
        let g = mean_matrix(&part, 0.7, 0.0);
        let r = eig_structure_report(&g, &part, 0.7, 0.0, &ToleranceConfig::default()).unwrap();
        assert!(r.deltas.iter().all(|d| d.abs() < 1e-10));
        assert!(r.passed());
    }

    #[test]
    fn single_cluster() {
        let part = Partition::from_sizes(&[10]);
        let g = mean_matrix(&part, 0.6, 0.1);
        let r = eig_structure_report(&g, &part, 0.6, 0.1, &ToleranceConfig::default()).unwrap();
        assert!((r.lambdas[0] - 6.0).abs() < 1e-10);
        assert!((r.deltas[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reduced_problem_matches_oracle() {
        let part = Partition::from_sizes(&[7, 3, 5]);
        let g = mean_matrix(&part, 0.9, 0.3);
        let dense = dense_eig_oracle(&g).unwrap().values;
        let reduced = mean_eigenvalues(&part, 0.9, 0.3);
        for (a, b) in reduced.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_one_weights() {
        let r = rank_one_check(&[3.0, 1.0, -2.0], 2.0, &[0.6, 0.0, 0.8], 1e-8).unwrap();
        assert!(r.passed());
        // z_2 = 0 leaves the eigenvalue 1 untouched; the other two solve a 2×2.
        assert!(r.weights[1].abs() < 1e-12);
        let top = 1.5 + 5.85f64.sqrt();
        assert!((r.weights[0] - (top - 3.0) / 2.0).abs() < 1e-12);
        assert!(rank_one_check(&[1.0], 0.0, &[1.0], 1e-8).is_err());
    }
}
