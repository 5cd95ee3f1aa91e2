//! Numerical checks of the structural facts behind the clustering
//! guarantee, evaluated on concrete instances.
//!
//! Every report exposes flat named margins through [`Check`]: larger is
//! better and a margin `>= 0` means the inequality held (strict
//! inequalities are reported as `> 0`).

mod decomposition;
mod eigs;
mod entries;
mod norms;
mod poly;

pub use decomposition::{decomposition_report, decomposition_report_with_basis, DecompositionReport};
pub use eigs::{eig_structure_report, mean_eigenvalues, rank_one_check, EigStructureReport, RankOneReport};
pub use entries::{f_entry_check, FEntryReport, F_ENTRY_MAX_N};
pub use norms::{
    noise_norm_check, projection_concentration_check, weyl_check, ProjectionConcentrationReport,
    WeylReport,
};
pub use poly::{sandwich_check, sandwich_on, spectral_claim_check, SandwichReport, SpectralClaimReport};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::PolyCoeffs;

/// Empirical stand-ins for unobservable proof constants, and the numeric
/// slack used by each check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Admitted bound on `‖E‖₂ / (σ √n)`.
    pub c0_hat: f64,
    /// Admitted constant `c` in `σ √k + c √(ln n)` for projected noise.
    pub c1_hat: f64,
    /// Admitted ratio of the noise term to `√(k p) ln² n + √(ln n)`.
    pub c3_hat: f64,
    pub delta_floor: f64,
    /// Relative slack on `Σ δ_i = n q`.
    pub delta_sum_rel: f64,
    pub lambda1_abs: f64,
    pub triangle_abs: f64,
    pub f_entry_abs: f64,
    pub weyl_abs: f64,
    pub rank_one_abs: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            c0_hat: 3.0,
            c1_hat: 3.0,
            c3_hat: 1.0,
            delta_floor: 1e-9,
            delta_sum_rel: 1e-6,
            lambda1_abs: 1e-8,
            triangle_abs: 1e-9,
            f_entry_abs: 1e-12,
            weyl_abs: 1e-8,
            rank_one_abs: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.c0_hat,
            self.c1_hat,
            self.c3_hat,
            self.delta_floor,
            self.delta_sum_rel,
            self.lambda1_abs,
            self.triangle_abs,
            self.f_entry_abs,
            self.weyl_abs,
            self.rank_one_abs,
        ];
        if all.iter().all(|&v| v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(crate::Error::InvalidParameters(
                "tolerance constants must be positive and finite".into(),
            ))
        }
    }
}

/// How eigenvalues of the sampled matrix are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMode {
    /// Every eigenvalue from a dense solver.
    #[default]
    Full,
    /// Top eigenpairs by subspace iteration; tail quantities are bounded
    /// through the spectral norm of the deflated matrix.
    Iterative,
}

/// A report reducible to named margins.
pub trait Check {
    fn margins(&self) -> Vec<(String, f64)>;

    fn passed(&self) -> bool {
        self.margins().iter().all(|(_, m)| *m >= 0.0)
    }
}

/// `n^{−ln ln n}` in natural logs, or `None` when `n < e^e` and the
/// exponent would not exceed one.
pub fn tail_bound(n: usize) -> Option<f64> {
    let x = n as f64;
    if x < std::f64::consts::E.powf(std::f64::consts::E) {
        return None;
    }
    let ln = x.ln();
    Some((-ln * ln.ln()).exp())
}

/// `r = round(ln n)`, at least one.
pub fn poly_power(n: usize) -> u32 {
    ((n.max(1) as f64).ln().round() as u32).max(1)
}

/// ψ pinned at `λ₁` and `μ`, raised to `r = round(ln n)`.
pub fn psi_coefficients(lambda1: f64, mu: f64, n: usize) -> Result<PolyCoeffs> {
    PolyCoeffs::new(lambda1, mu, poly_power(n))
}
