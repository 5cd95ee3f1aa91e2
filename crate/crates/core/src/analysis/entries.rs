use serde::Serialize;

use super::Check;
use crate::error::{check_dim, Error, Result};
use crate::graph_model::Partition;
use crate::linalg::{PolyCoeffs, SymMatrix};

/// Dense `F = ψ(G)` is formed explicitly; this caps its size.
pub const F_ENTRY_MAX_N: usize = 2048;

#[derive(Clone, Debug, Serialize)]
pub struct FEntryReport {
    pub intra_min: f64,
    pub intra_max: f64,
    pub inter_max_abs: f64,
    /// `5k / n`.
    pub intra_bound: f64,
    /// `10 / n`.
    pub inter_bound: f64,
    pub tolerance: f64,
}

impl Check for FEntryReport {
    fn margins(&self) -> Vec<(String, f64)> {
        let t = self.tolerance;
        let mut m = vec![
            ("f_intra_lower".into(), self.intra_min + t),
            ("f_intra_upper".into(), self.intra_bound + t - self.intra_max),
        ];
        if self.inter_max_abs.is_finite() {
            m.push(("f_inter".into(), self.inter_bound + t - self.inter_max_abs));
        }
        m
    }
}

/// Entry ranges of `F = A G² + B G` within and across clusters.
/// With a single cluster there are no inter entries and `inter_max_abs` is 0.
pub fn f_entry_check(
    g: &SymMatrix,
    partition: &Partition,
    coeffs: &PolyCoeffs,
    tolerance: f64,
) -> Result<FEntryReport> {
    let n = g.n();
    if n > F_ENTRY_MAX_N {
        return Err(Error::TooLarge {
            operation: "f_entry_check",
            n,
            limit: F_ENTRY_MAX_N,
        });
    }
    check_dim(n, partition.n())?;
    let g2 = g.mul_dense(g)?;
    let mut intra_min = f64::INFINITY;
    let mut intra_max = f64::NEG_INFINITY;
    let mut inter_max_abs = 0.0f64;
    for u in 0..n {
        for v in u..n {
            let f = coeffs.quadratic * g2[u * n + v] + coeffs.linear * g.get(u, v);
            if partition.same_cluster(u, v) {
                intra_min = intra_min.min(f);
                intra_max = intra_max.max(f);
            } else {
                inter_max_abs = inter_max_abs.max(f.abs());
            }
        }
    }
    let nf = n as f64;
    Ok(FEntryReport {
        intra_min,
        intra_max,
        inter_max_abs,
        intra_bound: 5.0 * partition.k() as f64 / nf,
        inter_bound: 10.0 / nf,
        tolerance,
    })
}
