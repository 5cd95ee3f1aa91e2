//! The quadratic `ψ(t) = A t² + B t` pinned at `ψ(0) = 0` and
//! `ψ(λ₁) = ψ(μ) = 1`, its power `φ = ψʳ`, and their action on vectors
//! through repeated matrix products.

use serde::{Deserialize, Serialize};

use super::matrix::{Block, SymMatrix};
use super::ops::matvec;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyCoeffs {
    /// `A = −1/(λ₁ μ)`.
    pub quadratic: f64,
    /// `B = 1/λ₁ + 1/μ`.
    pub linear: f64,
    pub power: u32,
    pub lambda1: f64,
    pub mu: f64,
}

impl PolyCoeffs {
    pub fn new(lambda1: f64, mu: f64, power: u32) -> Result<Self> {
        if !(lambda1 > 0.0 && mu > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "polynomial roots must be positive: lambda1 = {lambda1}, mu = {mu}"
            )));
        }
        if power == 0 {
            return Err(Error::InvalidParameters("polynomial power must be >= 1".into()));
        }
        Ok(Self {
            quadratic: -1.0 / (lambda1 * mu),
            linear: 1.0 / lambda1 + 1.0 / mu,
            power,
            lambda1,
            mu,
        })
    }

    pub fn psi(&self, t: f64) -> f64 {
        self.quadratic * t * t + self.linear * t
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.psi(t).powi(self.power as i32)
    }
}

/// `ψ(A) x = A·A(Ax) + B·Ax`, two matrix-vector products.
pub fn apply_psi(a: &SymMatrix, c: &PolyCoeffs, x: &[f64]) -> Result<Vec<f64>> {
    let y = matvec(a, x)?;
    let z = matvec(a, &y)?;
    Ok(z
        .iter()
        .zip(&y)
        .map(|(zi, yi)| c.quadratic * zi + c.linear * yi)
        .collect())
}

/// `φ(A) x`: [`apply_psi`] applied `r` times.
pub fn apply_phi(a: &SymMatrix, c: &PolyCoeffs, x: &[f64]) -> Result<Vec<f64>> {
    let mut v = x.to_vec();
    for _ in 0..c.power {
        v = apply_psi(a, c, &v)?;
    }
    Ok(v)
}

/// `ψ(A) X` column by column, using blocked products.
pub fn apply_psi_block(a: &SymMatrix, c: &PolyCoeffs, x: &Block) -> Result<Block> {
    let mut y = a.mul_block(x)?;
    let z = a.mul_block(&y)?;
    y.scale(c.linear);
    y.add_scaled(c.quadratic, &z)?;
    Ok(y)
}

/// `φ(A) X` column by column.
pub fn apply_phi_block(a: &SymMatrix, c: &PolyCoeffs, x: &Block) -> Result<Block> {
    let mut v = x.clone();
    for _ in 0..c.power {
        v = apply_psi_block(a, c, &v)?;
    }
    Ok(v)
}
