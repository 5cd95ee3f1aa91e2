//! Dense symmetric linear algebra.

pub mod io;
pub mod jacobi;
pub mod matrix;
pub mod norms;
pub mod ops;
pub mod poly;
pub mod spectrum;
pub mod subspace;

pub use jacobi::{dense_eig_oracle, DenseEigen, ORACLE_MAX_N};
pub use matrix::{Block, SymMatrix};
pub use norms::{spectral_norm, spectral_norm_with_floor, two_to_inf_norm};
pub use ops::{dot, matvec, norm};
pub use poly::{apply_phi, apply_phi_block, apply_psi, PolyCoeffs};
pub use spectrum::full_spectrum;
pub use subspace::{top_k_eigs, EigOptions, EigenBasis};

/// `project(basis, x) = V (Vᵀ x)`.
pub fn project(basis: &EigenBasis, x: &[f64]) -> crate::Result<Vec<f64>> {
    basis.project(x)
}
