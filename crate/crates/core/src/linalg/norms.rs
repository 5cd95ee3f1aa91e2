use super::matrix::SymMatrix;
use super::ops::{dot, matvec, norm};
use crate::error::{Error, Result};
use crate::rng::Xoshiro256StarStar;

/// `‖A‖_{2→∞}`: the largest Euclidean norm of a row.
pub fn two_to_inf_norm(a: &SymMatrix) -> f64 {
    (0..a.n()).map(|i| norm(a.row(i))).fold(0.0, f64::max)
}

/// Same norm for a general row-major `rows × cols` buffer.
pub fn two_to_inf_norm_rows(data: &[f64], cols: usize) -> f64 {
    if cols == 0 {
        return 0.0;
    }
    data.chunks(cols).map(norm).fold(0.0, f64::max)
}

/// `‖A‖₂` by power iteration on `A²`, which is positive semidefinite and has
/// `‖A‖₂²` as its top eigenvalue whatever the sign of the dominant
/// eigenvalue of `A`.
///
/// Stops once `‖A²x − θx‖ ≤ tol·θ` for the Rayleigh quotient `θ`. On
/// failure the error carries the best estimate seen.
pub fn spectral_norm(a: &SymMatrix, tol: f64, max_iter: usize, seed: u64) -> Result<f64> {
    spectral_norm_with_floor(a, tol, 0.0, max_iter, seed)
}

/// [`spectral_norm`] that also accepts `‖A²x − θx‖ ≤ floor`, for matrices
/// whose spectrum is pure rounding noise.
pub fn spectral_norm_with_floor(
    a: &SymMatrix,
    tol: f64,
    floor: f64,
    max_iter: usize,
    seed: u64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "spectral_norm tolerance must be positive, got {tol}"
        )));
    }
    let n = a.n();
    if n == 0 || a.frobenius_norm() == 0.0 {
        return Ok(0.0);
    }
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut x = rng.unit_vector(n);
    let mut best = 0.0f64;
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let y = matvec(a, &x)?;
        let z = matvec(a, &y)?;
        let theta = dot(&x, &z);
        let z_norm = norm(&z);
        if z_norm == 0.0 {
            x = rng.unit_vector(n);
            continue;
        }
        best = best.max(norm(&y));
        residual = z
            .iter()
            .zip(&x)
            .map(|(zi, xi)| (zi - theta * xi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol * theta || residual <= floor {
            return Ok(theta.sqrt().max(best));
        }
        x = z.into_iter().map(|v| v / z_norm).collect();
    }
    Err(Error::NonConvergence {
        solver: "spectral_norm",
        iterations: max_iter,
        max_residual: residual,
        estimate: vec![best],
        residuals: vec![residual],
    })
}
