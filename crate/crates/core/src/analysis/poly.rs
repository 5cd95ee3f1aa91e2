use serde::Serialize;

use super::{tail_bound, Check, SpectrumMode};
use crate::error::{check_dim, Error, Result};
use crate::linalg::ops::norm;
use crate::linalg::{
    apply_phi_block, full_spectrum, spectral_norm_with_floor, top_k_eigs, Block, EigOptions, EigenBasis,
    PolyCoeffs, SymMatrix,
};
use crate::rng::Xoshiro256StarStar;

const DEFLATED_NORM_TOL: f64 = 1e-7;
const DEFLATED_NORM_MAX_ITER: usize = 20_000;

#[derive(Clone, Debug, Serialize)]
pub struct SpectralClaimReport {
    pub n: usize,
    pub k: usize,
    pub mode: SpectrumMode,
    /// `φ(λ̂_i)` for `i ≤ k`.
    pub phi_top_hat: Vec<f64>,
    /// `φ(λ_i)` for `i ≤ k`.
    pub phi_top_mean: Vec<f64>,
    /// `max_{i>k} |φ(λ̂_i)|`, exact in full mode and an upper bound otherwise.
    pub tail_phi_max: f64,
    /// `n^{−ln ln n}`; absent when not applicable.
    pub tail_bound: Option<f64>,
}

fn top_margin(values: &[f64]) -> f64 {
    0.5 - values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max)
}

impl SpectralClaimReport {
    pub fn top_hat_holds(&self) -> bool {
        top_margin(&self.phi_top_hat) > 0.0
    }

    pub fn top_mean_holds(&self) -> bool {
        top_margin(&self.phi_top_mean) > 0.0
    }

    /// `None` when the tail condition is not applicable.
    pub fn tail_holds(&self) -> Option<bool> {
        self.tail_bound.map(|b| self.tail_phi_max < b)
    }
}

impl Check for SpectralClaimReport {
    fn margins(&self) -> Vec<(String, f64)> {
        let mut m = vec![
            ("claim_top_hat".into(), top_margin(&self.phi_top_hat)),
            ("claim_top_mean".into(), top_margin(&self.phi_top_mean)),
        ];
        if let Some(b) = self.tail_bound {
            m.push(("claim_tail".into(), b - self.tail_phi_max));
        }
        m
    }

    /// The claim is made of strict inequalities.
    fn passed(&self) -> bool {
        self.margins().iter().all(|(_, m)| *m > 0.0)
    }
}

/// `max_{|t| ≤ ρ} |φ(t)|`: `|ψ|` on an interval peaks at an endpoint or at
/// the vertex `−B / (2A)`.
fn phi_max_on_interval(c: &PolyCoeffs, rho: f64) -> f64 {
    let vertex = -c.linear / (2.0 * c.quadratic);
    let mut m = c.psi(rho).abs().max(c.psi(-rho).abs());
    if vertex.abs() <= rho {
        m = m.max(c.psi(vertex).abs());
    }
    m.powi(c.power as i32)
}

/// `‖Ĝ − V Λ Vᵀ‖₂`, the largest magnitude outside the top-k eigenpairs.
fn deflated_norm(g_hat: &SymMatrix, basis: &EigenBasis, seed: u64) -> Result<f64> {
    let v = &basis.vectors;
    let k = basis.k();
    let deflated = SymMatrix::from_upper_fn(g_hat.n(), |i, j| {
        let low: f64 = (0..k).map(|l| basis.values[l] * v.get(i, l) * v.get(j, l)).sum();
        g_hat.get(i, j) - low
    });
    // Residual eigenvalues below 1e-8 ‖Ĝ‖_F are rounding noise.
    let floor = DEFLATED_NORM_TOL * (1e-8 * g_hat.frobenius_norm()).powi(2);
    let rho = spectral_norm_with_floor(
        &deflated,
        DEFLATED_NORM_TOL,
        floor,
        DEFLATED_NORM_MAX_ITER,
        seed,
    )?;
    // The Rayleigh estimate approaches from below.
    Ok(rho * (1.0 + DEFLATED_NORM_TOL))
}

/// Evaluates the three spectral conditions on `φ`: near one on the top `k`
/// eigenvalues of `Ĝ` and of `G`, and below `n^{−ln ln n}` on the rest of
/// the spectrum of `Ĝ`.
pub fn spectral_claim_check(
    g: &SymMatrix,
    g_hat: &SymMatrix,
    coeffs: &PolyCoeffs,
    k: usize,
    mode: SpectrumMode,
    opts: &EigOptions,
) -> Result<SpectralClaimReport> {
    let n = g.n();
    check_dim(n, g_hat.n())?;
    if k == 0 || k >= n {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let mean_top = top_k_eigs(g, k, opts)?.values;
    let (hat_top, tail_phi_max) = match mode {
        SpectrumMode::Full => {
            let spec = full_spectrum(g_hat);
            let tail = spec[k..].iter().map(|&t| coeffs.phi(t).abs()).fold(0.0, f64::max);
            (spec[..k].to_vec(), tail)
        }
        SpectrumMode::Iterative => {
            let basis = top_k_eigs(g_hat, k, opts)?;
            let rho = deflated_norm(g_hat, &basis, opts.seed ^ 0x5eed)?;
            (basis.values, phi_max_on_interval(coeffs, rho))
        }
    };
    Ok(SpectralClaimReport {
        n,
        k,
        mode,
        phi_top_hat: hat_top.iter().map(|&t| coeffs.phi(t)).collect(),
        phi_top_mean: mean_top.iter().map(|&t| coeffs.phi(t)).collect(),
        tail_phi_max,
        tail_bound: tail_bound(n),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub num_x: usize,
    /// `min_x ‖φ(Ĝ)x‖ − ½‖P_Ĝ x‖`.
    pub lower_hat: f64,
    /// `min_x (3/2)‖P_Ĝ x‖ + ‖x‖ n^{−ln ln n} − ‖φ(Ĝ)x‖`.
    pub upper_hat: f64,
    /// As `lower_hat` with `G` in place of `Ĝ`.
    pub lower_mean: f64,
    /// `min_x (3/2)‖P_G x‖ − ‖φ(G)x‖`.
    pub upper_mean: f64,
}

impl Check for SandwichReport {
    fn margins(&self) -> Vec<(String, f64)> {
        vec![
            ("sandwich_lower_hat".into(), self.lower_hat),
            ("sandwich_upper_hat".into(), self.upper_hat),
            ("sandwich_lower_mean".into(), self.lower_mean),
            ("sandwich_upper_mean".into(), self.upper_mean),
        ]
    }
}

fn random_unit_block(n: usize, count: usize, seed: u64) -> Block {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let cols: Vec<Vec<f64>> = (0..count).map(|_| rng.unit_vector(n)).collect();
    Block::from_columns(n, &cols).expect("columns have length n")
}

/// Worst-case margins of both projector sandwiches over `num_x` random
/// unit vectors.
pub fn sandwich_check(
    g_hat: &SymMatrix,
    g: &SymMatrix,
    coeffs: &PolyCoeffs,
    k: usize,
    num_x: usize,
    seed: u64,
    opts: &EigOptions,
) -> Result<SandwichReport> {
    let n = g.n();
    check_dim(n, g_hat.n())?;
    if num_x == 0 {
        return Err(Error::InvalidParameters("num_x must be >= 1".into()));
    }
    let x = random_unit_block(n, num_x, seed);
    sandwich_on(g_hat, g, coeffs, k, &x, opts)
}

/// [`sandwich_check`] on caller-supplied vectors (columns of `x`).
pub fn sandwich_on(
    g_hat: &SymMatrix,
    g: &SymMatrix,
    coeffs: &PolyCoeffs,
    k: usize,
    x: &Block,
    opts: &EigOptions,
) -> Result<SandwichReport> {
    let hat_basis = top_k_eigs(g_hat, k, opts)?;
    let mean_basis = top_k_eigs(g, k, opts)?;
    let phi_hat = apply_phi_block(g_hat, coeffs, x)?;
    let phi_mean = apply_phi_block(g, coeffs, x)?;
    let c_hat = hat_basis.vectors.t_mul(x)?;
    let c_mean = mean_basis.vectors.t_mul(x)?;
    let tail = tail_bound(g.n()).unwrap_or(0.0);
    let m = x.cols();
    let coord_norm = |c: &[f64], j: usize| (0..k).map(|i| c[i * m + j].powi(2)).sum::<f64>().sqrt();
    let mut r = SandwichReport {
        num_x: m,
        lower_hat: f64::INFINITY,
        upper_hat: f64::INFINITY,
        lower_mean: f64::INFINITY,
        upper_mean: f64::INFINITY,
    };
    for j in 0..m {
        let xn = norm(x.column(j));
        let (ph, pm) = (coord_norm(&c_hat, j), coord_norm(&c_mean, j));
        let (fh, fm) = (norm(phi_hat.column(j)), norm(phi_mean.column(j)));
        r.lower_hat = r.lower_hat.min(fh - 0.5 * ph);
        r.upper_hat = r.upper_hat.min(1.5 * ph + xn * tail - fh);
        r.lower_mean = r.lower_mean.min(fm - 0.5 * pm);
        r.upper_mean = r.upper_mean.min(1.5 * pm - fm);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::{mean_matrix, Partition};

    fn tight() -> EigOptions {
        EigOptions {
            tol: 1e-12,
            ..EigOptions::default()
        }
    }

    fn equal_instance() -> (SymMatrix, PolyCoeffs) {
        let part = Partition::from_sizes(&[10, 10]);
        let g = mean_matrix(&part, 0.8, 0.2);
        // λ₁ = 10, μ = 6.
        (g, PolyCoeffs::new(10.0, 6.0, 3).unwrap())
    }

    #[test]
    fn noise_free_claim_is_exact() {
        let (g, c) = equal_instance();
        for mode in [SpectrumMode::Full, SpectrumMode::Iterative] {
            let r = spectral_claim_check(&g, &g, &c, 2, mode, &EigOptions::default()).unwrap();
            for v in r.phi_top_hat.iter().chain(&r.phi_top_mean) {
                assert!((v - 1.0).abs() < 1e-9);
            }
            assert!(r.tail_phi_max < 1e-9);
            assert!(r.top_hat_holds() && r.top_mean_holds());
            assert_eq!(r.tail_holds(), Some(true));
        }
    }

    #[test]
    fn interval_maximum() {
        let c = PolyCoeffs::new(10.0, 6.0, 1).unwrap();
        let rho = 2.0;
        let brute = (0..=2000)
            .map(|i| c.psi(-rho + 2.0 * rho * i as f64 / 2000.0).abs())
            .fold(0.0, f64::max);
        assert!((phi_max_on_interval(&c, rho) - brute).abs() < 1e-12);
        // Vertex at 8 lies inside [−9, 9].
        assert!((phi_max_on_interval(&c, 9.0) - c.psi(-9.0).abs()).abs() < 1e-12);
    }

    #[test]
    fn sandwich_on_eigenvectors_and_complement() {
        let (g, c) = equal_instance();
        let opts = tight();
        let basis = top_k_eigs(&g, 2, &opts).unwrap();
        let inside = Block::from_columns(20, &[basis.vectors.column(0).to_vec()]).unwrap();
        let r = sandwich_on(&g, &g, &c, 2, &inside, &opts).unwrap();
        assert!((r.lower_mean - 0.5).abs() < 1e-9);
        assert!((r.upper_mean - 0.5).abs() < 1e-9);
        let mut orth = vec![0.0; 20];
        orth[0] = 1.0 / 2f64.sqrt();
        orth[1] = -1.0 / 2f64.sqrt();
        let outside = Block::from_columns(20, &[orth]).unwrap();
        let r = sandwich_on(&g, &g, &c, 2, &outside, &opts).unwrap();
        assert!(r.lower_mean.abs() < 1e-9 && r.upper_mean.abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn sandwich_random_vectors_noise_free() {
        let (g, c) = equal_instance();
        let r = sandwich_check(&g, &g, &c, 2, 10, 4, &EigOptions::default()).unwrap();
        assert!(r.passed());
        assert!(sandwich_check(&g, &g, &c, 2, 0, 4, &EigOptions::default()).is_err());
    }
}
