//! Top-k symmetric eigenpairs by block subspace iteration with
//! Rayleigh-Ritz extraction.
//!
//! The block holds `k + max(4, k)` vectors (capped at `n`). Each sweep
//! multiplies by `A + cI`, where `c` estimates `-λ_min(A)` (see
//! [`iteration_shift`]); the shift pushes the bottom of the spectrum
//! towards zero without changing the eigenvector ordering, so the dominant
//! block is the algebraically largest one. The block is re-orthonormalized with two
//! passes of modified Gram-Schmidt, and the Ritz pairs of the projected
//! `m × m` problem are taken as the current approximations. Convergence is
//! declared once each of the `k` wanted Ritz pairs has
//! `‖A v − θ v‖ ≤ tol · max(1, |θ|)`.

use serde::{Deserialize, Serialize};

use super::matrix::{Block, SymMatrix};
use super::ops::{axpy, dot, norm};
use super::spectrum::small_symmetric_eigen;
use crate::error::{check_dim, Error, Result};
use crate::rng::Xoshiro256StarStar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 1000,
            seed: 0,
        }
    }
}

impl EigOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// The `k` algebraically largest eigenpairs of a symmetric matrix.
///
/// `vectors` has orthonormal columns; `v_i` pairs with `values[i]`, and
/// values are sorted descending. The orthogonal projector onto their span
/// is `V Vᵀ`, applied through [`EigenBasis::project`] without ever being
/// formed.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    pub values: Vec<f64>,
    pub vectors: Block,
    /// Iterations used; 0 when produced directly from a dense solver.
    pub iterations: usize,
}

impl EigenBasis {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn n(&self) -> usize {
        self.vectors.rows()
    }

    /// Coordinates `Vᵀ x` in the basis.
    pub fn coords(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.vectors.t_mul_vec(x)
    }

    /// `V (Vᵀ x)`.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let c = self.coords(x)?;
        self.vectors.mul_vec(&c)
    }

    /// Residual norms `‖A v_i − λ_i v_i‖`.
    pub fn residuals(&self, a: &SymMatrix) -> Result<Vec<f64>> {
        check_dim(a.n(), self.n())?;
        let av = a.mul_block(&self.vectors)?;
        Ok((0..self.k())
            .map(|i| residual(av.column(i), self.vectors.column(i), self.values[i]))
            .collect())
    }

    /// The basis built from the leading `k` columns of a dense decomposition.
    pub fn from_dense(values: &[f64], vectors: &Block, k: usize) -> Self {
        Self {
            values: values[..k].to_vec(),
            vectors: vectors.leading(k),
            iterations: 0,
        }
    }
}

fn residual(av: &[f64], v: &[f64], theta: f64) -> f64 {
    av.iter()
        .zip(v)
        .map(|(a, b)| (a - theta * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Oversampled block width.
pub fn block_width(n: usize, k: usize) -> usize {
    (k + k.max(4)).min(n)
}

/// Gershgorin bound `max(0, max_i Σ_{j≠i} |a_ij| − a_ii) ≥ −λ_min(A)`.
pub fn gershgorin_shift(a: &SymMatrix) -> f64 {
    (0..a.n())
        .map(|i| {
            let row = a.row(i);
            let off: f64 = row.iter().map(|v| v.abs()).sum::<f64>() - row[i].abs();
            off - row[i]
        })
        .fold(0.0, f64::max)
}

const SHIFT_PROBE_ITERS: usize = 30;
const SHIFT_SAFETY: f64 = 1.1;

/// Shift `c` for the iteration operator `A + cI`.
///
/// A short power iteration on `sI − A` (`s` the largest absolute row sum)
/// yields a Rayleigh estimate `θ ≥ λ_min`; the shift is `1.1·max(0, −θ)`,
/// capped by the Gershgorin bound. Slightly under-shifting is harmless:
/// Rayleigh-Ritz still picks the algebraically largest pairs, and only a
/// shift below `−(λ_min + λ_k)/2` would let the bottom edge compete.
pub fn iteration_shift(a: &SymMatrix, rng: &mut Xoshiro256StarStar) -> Result<f64> {
    let cap = gershgorin_shift(a);
    if cap == 0.0 {
        return Ok(0.0);
    }
    let n = a.n();
    let s = (0..n)
        .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut x = rng.unit_vector(n);
    let mut theta = f64::INFINITY;
    for _ in 0..SHIFT_PROBE_ITERS {
        let ax = super::ops::matvec(a, &x)?;
        let bx: Vec<f64> = x.iter().zip(&ax).map(|(xi, ai)| s * xi - ai).collect();
        theta = theta.min(dot(&x, &ax));
        let bn = norm(&bx);
        if bn == 0.0 {
            break;
        }
        x = bx.into_iter().map(|v| v / bn).collect();
    }
    Ok((SHIFT_SAFETY * (-theta).max(0.0)).min(cap))
}

/// Orthonormalizes the columns of `q` in place (two MGS passes). Columns
/// that collapse numerically are replaced by fresh random directions.
pub(crate) fn orthonormalize(q: &mut Block, rng: &mut Xoshiro256StarStar) {
    let (n, m) = (q.rows(), q.cols());
    for j in 0..m {
        let mut attempts = 0;
        loop {
            let before = norm(q.column(j));
            for _ in 0..2 {
                for i in 0..j {
                    let (head, tail) = q.column_pair_mut(i, j);
                    let proj = dot(head, tail);
                    axpy(-proj, head, tail);
                }
            }
            let after = norm(q.column(j));
            if after > 1e-10 * before.max(f64::MIN_POSITIVE) && after > 0.0 {
                q.column_mut(j).iter_mut().for_each(|v| *v /= after);
                break;
            }
            attempts += 1;
            assert!(attempts < 100, "cannot extend an orthonormal basis of R^{n}");
            for v in q.column_mut(j) {
                *v = rng.next_signed();
            }
        }
    }
}

/// The `k` algebraically largest eigenpairs of `a`.
pub fn top_k_eigs(a: &SymMatrix, k: usize, opts: &EigOptions) -> Result<EigenBasis> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!(
            "top_k_eigs needs 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "eigensolver tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let m = block_width(n, k);
    let mut rng = Xoshiro256StarStar::seed_from_u64(opts.seed);
    let shift = iteration_shift(a, &mut rng)?;

    let mut q = Block::zeros(n, m);
    for j in 0..m {
        for v in q.column_mut(j) {
            *v = rng.next_signed();
        }
    }
    orthonormalize(&mut q, &mut rng);

    let mut last_values = Vec::new();
    let mut last_residuals = Vec::new();
    for iteration in 1..=opts.max_iter.max(1) {
        let w = a.mul_block(&q)?;
        let t = q.t_mul(&w)?;
        let (theta, y) = small_symmetric_eigen(&t, m);
        let v = q.mul_small(&y, m)?;
        let av = w.mul_small(&y, m)?;

        let residuals: Vec<f64> = (0..k)
            .map(|i| residual(av.column(i), v.column(i), theta[i]))
            .collect();
        let converged = residuals
            .iter()
            .zip(&theta)
            .all(|(r, th)| *r <= opts.tol * th.abs().max(1.0));
        if converged {
            return Ok(EigenBasis {
                values: theta[..k].to_vec(),
                vectors: v.leading(k),
                iterations: iteration,
            });
        }
        last_values = theta[..k].to_vec();
        last_residuals = residuals;
        if iteration == opts.max_iter {
            break;
        }

        q = av;
        q.add_scaled(shift, &v)?;
        orthonormalize(&mut q, &mut rng);
    }
    Err(Error::NonConvergence {
        solver: "top_k_eigs",
        iterations: opts.max_iter,
        max_residual: last_residuals.iter().copied().fold(0.0, f64::max),
        estimate: last_values,
        residuals: last_residuals,
    })
}
