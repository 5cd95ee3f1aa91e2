use rayon::prelude::*;
use serde::Serialize;

use super::{Check, SpectrumMode};
use crate::error::{check_dim, Error, Result};
use crate::graph_model::Partition;
use crate::linalg::ops::norm;
use crate::linalg::{full_spectrum, spectral_norm, top_k_eigs, EigOptions, SymMatrix};
use crate::rng::{derive_seed, Xoshiro256StarStar};

const NORM_TOL: f64 = 1e-7;
const NORM_MAX_ITER: usize = 20_000;

/// `‖E‖₂ / (σ √n)` by power iteration.
pub fn noise_norm_check(e: &SymMatrix, sigma: f64, seed: u64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameters(format!("sigma must be positive, got {sigma}")));
    }
    let s = spectral_norm(e, NORM_TOL, NORM_MAX_ITER, seed)?;
    Ok(s / (sigma * (e.n() as f64).sqrt()))
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    /// `|λ_i(G) − λ_i(Ĝ)|` for the top `m` pairs.
    pub differences: Vec<f64>,
    pub noise_norm: f64,
    pub slack: f64,
}

impl Check for WeylReport {
    fn margins(&self) -> Vec<(String, f64)> {
        let worst = self.differences.iter().copied().fold(0.0, f64::max);
        vec![("weyl".into(), self.noise_norm + self.slack - worst)]
    }
}

/// Eigenvalue displacement of the top `m` pairs against `‖E‖₂`.
pub fn weyl_check(
    g: &SymMatrix,
    g_hat: &SymMatrix,
    e: &SymMatrix,
    m: usize,
    mode: SpectrumMode,
    opts: &EigOptions,
    slack: f64,
) -> Result<WeylReport> {
    let n = g.n();
    check_dim(n, g_hat.n())?;
    check_dim(n, e.n())?;
    if m == 0 || m > n {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let (top, top_hat, noise_norm) = match mode {
        SpectrumMode::Full => {
            let es = full_spectrum(e);
            let en = es.first().map_or(0.0, |&a| a.abs().max(es[es.len() - 1].abs()));
            (full_spectrum(g)[..m].to_vec(), full_spectrum(g_hat)[..m].to_vec(), en)
        }
        SpectrumMode::Iterative => (
            top_k_eigs(g, m, opts)?.values,
            top_k_eigs(g_hat, m, opts)?.values,
            spectral_norm(e, NORM_TOL, NORM_MAX_ITER, opts.seed)? * (1.0 + NORM_TOL),
        ),
    };
    Ok(WeylReport {
        differences: top.iter().zip(&top_hat).map(|(a, b)| (a - b).abs()).collect(),
        noise_norm,
        slack,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionConcentrationReport {
    pub trials: usize,
    pub sigma: f64,
    /// `‖P_G X‖` per trial, in trial order.
    pub projections: Vec<f64>,
    pub median: f64,
    pub q90: f64,
    pub q99: f64,
    pub max: f64,
    /// `(c, σ√k + c√(ln n), fraction of trials at or below)`.
    pub thresholds: Vec<(f64, f64, f64)>,
    /// Constant whose threshold is compared with the 99th percentile.
    pub c_check: f64,
    pub threshold_check: f64,
}

impl Check for ProjectionConcentrationReport {
    fn margins(&self) -> Vec<(String, f64)> {
        vec![("projconc_q99".into(), self.threshold_check - self.q99)]
    }
}

/// Nearest-rank quantile of sorted data.
fn quantile(sorted: &[f64], level: f64) -> f64 {
    let rank = ((level * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// Projects fresh noise columns onto the fixed top-k eigenspace of the
/// mean matrix. Trial `t` perturbs column `t mod n` with its own stream.
#[allow(clippy::too_many_arguments)]
pub fn projection_concentration_check(
    g: &SymMatrix,
    partition: &Partition,
    p: f64,
    q: f64,
    trials: usize,
    seed: u64,
    c_grid: &[f64],
    c_check: f64,
    opts: &EigOptions,
) -> Result<ProjectionConcentrationReport> {
    let n = g.n();
    check_dim(n, partition.n())?;
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be >= 1".into()));
    }
    let k = partition.k();
    let basis = top_k_eigs(g, k, opts)?;
    let sigma = (p * (1.0 - p)).max(q * (1.0 - q)).sqrt();
    let projections: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let u = t % n;
            let mut rng = Xoshiro256StarStar::seed_from_u64(derive_seed(seed, t as u64));
            let x: Vec<f64> = g
                .column(u)
                .iter()
                .map(|&m| if rng.bernoulli(m) { 1.0 - m } else { -m })
                .collect();
            basis.coords(&x).map(|c| norm(&c))
        })
        .collect::<Result<_>>()?;
    let mut sorted = projections.clone();
    sorted.sort_by(f64::total_cmp);
    let base = sigma * (k as f64).sqrt();
    let log_root = (n as f64).ln().max(0.0).sqrt();
    let thresholds = c_grid
        .iter()
        .map(|&c| {
            let thr = base + c * log_root;
            let below = sorted.iter().filter(|&&x| x <= thr).count();
            (c, thr, below as f64 / trials as f64)
        })
        .collect();
    Ok(ProjectionConcentrationReport {
        trials,
        sigma,
        median: quantile(&sorted, 0.5),
        q90: quantile(&sorted, 0.9),
        q99: quantile(&sorted, 0.99),
        max: sorted[trials - 1],
        thresholds,
        c_check,
        threshold_check: base + c_check * log_root,
        projections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::mean_matrix;

    #[test]
    fn zero_noise_ratio() {
        assert_eq!(noise_norm_check(&SymMatrix::zeros(5), 0.5, 1).unwrap(), 0.0);
        assert!(noise_norm_check(&SymMatrix::zeros(5), 0.0, 1).is_err());
    }

    #[test]
    fn weyl_shift_is_tight() {
        let part = Partition::from_sizes(&[5, 5]);
        let g = mean_matrix(&part, 0.9, 0.1);
        let e = SymMatrix::identity(10).scaled(0.25);
        let g_hat = g.add(&e).unwrap();
        for mode in [SpectrumMode::Full, SpectrumMode::Iterative] {
            let r = weyl_check(&g, &g_hat, &e, 4, mode, &EigOptions::default(), 1e-8).unwrap();
            for d in &r.differences {
                assert!((d - 0.25).abs() < 1e-7, "{mode:?} {d}");
            }
            assert!(r.passed());
        }
        let zero = SymMatrix::zeros(10);
        let r = weyl_check(&g, &g, &zero, 2, SpectrumMode::Full, &EigOptions::default(), 1e-8)
            .unwrap();
        assert!(r.differences.iter().all(|d| d.abs() < 1e-12));
    }

    #[test]
    fn full_space_projection_is_the_norm() {
        // k = n: every vertex its own cluster, projector = identity.
        let part = Partition::from_labels((0..6).collect());
        let g = mean_matrix(&part, 0.5, 0.2);
        let r = projection_concentration_check(
            &g, &part, 0.5, 0.2, 12, 3, &[1.0, 3.0], 3.0, &EigOptions::default(),
        )
        .unwrap();
        for (t, &proj) in r.projections.iter().enumerate() {
            let u = t % 6;
            let mut rng = Xoshiro256StarStar::seed_from_u64(derive_seed(3, t as u64));
            let x: Vec<f64> = g
                .column(u)
                .iter()
                .map(|&m| if rng.bernoulli(m) { 1.0 - m } else { -m })
                .collect();
            assert!((proj - norm(&x)).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_zero_noise_projection() {
        // p = 1, q = 0 draws no randomness in effect: X = 0.
        let part = Partition::from_sizes(&[4, 4]);
        let g = mean_matrix(&part, 1.0, 0.0);
        let r = projection_concentration_check(
            &g, &part, 1.0, 0.0, 5, 0, &[0.0], 0.0, &EigOptions::default(),
        )
        .unwrap();
        assert!(r.max < 1e-12);
        assert!(r.passed());
    }

    #[test]
    fn quantile_nearest_rank() {
        let s: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(quantile(&s, 0.99), 99.0);
        assert_eq!(quantile(&s, 0.5), 50.0);
        assert_eq!(quantile(&[3.0], 0.99), 3.0);
    }
}
