use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph_model::Partition;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryReport {
    /// True iff the partitions coincide up to relabeling.
    pub exact: bool,
    /// Fraction of vertices agreeing under the best label matching.
    pub agreement: f64,
    /// `confusion[i][j]` counts vertices in truth cluster `i` and found
    /// cluster `j`.
    pub confusion: Vec<Vec<usize>>,
    /// Found label matched to each truth label, if any.
    pub matching: Vec<Option<usize>>,
}

/// Scores `found` against `truth` with an optimal one-to-one label matching.
pub fn compare_partitions(truth: &Partition, found: &Partition) -> Result<RecoveryReport> {
    let n = truth.n();
    if found.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: found.n(),
        });
    }
    let (kt, kf) = (truth.k(), found.k());
    let mut confusion = vec![vec![0usize; kf]; kt];
    for (&a, &b) in truth.assignment().iter().zip(found.assignment()) {
        confusion[a][b] += 1;
    }
    let mut matching = vec![None; kt];
    let mut matched = 0usize;
    if n > 0 {
        // kuhn_munkres needs rows <= columns.
        let transpose = kt > kf;
        let (rows, cols) = if transpose { (kf, kt) } else { (kt, kf) };
        let weights = Matrix::from_fn(rows, cols, |(r, c)| {
            let (i, j) = if transpose { (c, r) } else { (r, c) };
            confusion[i][j] as i64
        });
        let (total, assign) = kuhn_munkres(&weights);
        matched = total as usize;
        for (r, &c) in assign.iter().enumerate() {
            let (i, j) = if transpose { (c, r) } else { (r, c) };
            if confusion[i][j] > 0 {
                matching[i] = Some(j);
            }
        }
    }
    Ok(RecoveryReport {
        exact: matched == n && kt == kf,
        agreement: if n == 0 { 1.0 } else { matched as f64 / n as f64 },
        confusion,
        matching,
    })
}
