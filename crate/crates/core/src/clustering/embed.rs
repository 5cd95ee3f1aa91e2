use crate::error::{Error, Result};
use crate::linalg::ops::distance;
use crate::linalg::{top_k_eigs, EigOptions, EigenBasis, SymMatrix};

/// Spectral representation `ρ(u) = P Ĝ_u`, stored as coordinates `Vᵀ Ĝ_u`
/// in the orthonormal eigenbasis. Because the basis is orthonormal,
/// distances between coordinate vectors equal distances between the
/// ambient projections.
#[derive(Clone, Debug)]
pub struct Embedding {
    n: usize,
    dim: usize,
    /// Row-major `n × dim`.
    coords: Vec<f64>,
    /// Clear-cut threshold, when the model parameters are known.
    pub delta: Option<f64>,
    /// Basis the coordinates refer to; absent for synthetic point sets.
    pub basis: Option<EigenBasis>,
}

impl Embedding {
    /// A bare point cloud, for driving the distance-based clusterers directly.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidParameters("points differ in dimension".into()));
        }
        Ok(Self {
            n: points.len(),
            dim,
            coords: points.concat(),
            delta: None,
            basis: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, u: usize) -> &[f64] {
        &self.coords[u * self.dim..(u + 1) * self.dim]
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        distance(self.point(u), self.point(v))
    }

    /// `ρ(u)` in the ambient space, `V · coords(u)`.
    pub fn ambient(&self, u: usize) -> Option<Vec<f64>> {
        let basis = self.basis.as_ref()?;
        basis.vectors.mul_vec(self.point(u)).ok()
    }
}

/// Computes the top-k eigenbasis of `adjacency` and the coordinates
/// `Vᵀ Ĝ_u` of every column.
pub fn embed(adjacency: &SymMatrix, k: usize, opts: &EigOptions) -> Result<Embedding> {
    let basis = top_k_eigs(adjacency, k, opts)?;
    let n = adjacency.n();
    // Column u of Ĝ V is Vᵀ Ĝ_u since Ĝ is symmetric; we need it row-wise.
    let gv = adjacency.mul_block(&basis.vectors)?;
    let mut coords = vec![0.0; n * k];
    for i in 0..k {
        for (u, &v) in gv.column(i).iter().enumerate() {
            coords[u * k + i] = v;
        }
    }
    Ok(Embedding {
        n,
        dim: k,
        coords,
        delta: None,
        basis: Some(basis),
    })
}
