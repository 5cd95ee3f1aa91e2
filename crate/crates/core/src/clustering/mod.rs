//! The vanilla-SVD clustering pipeline: project every adjacency column onto
//! the top-k eigenspace, then group vertices by distance alone.

mod compare;
mod distance;
mod embed;
mod estimate;

pub use compare::{compare_partitions, RecoveryReport};
pub use distance::{mst_cluster, threshold_cluster};
pub use embed::{embed, Embedding};
pub use estimate::{estimate_k, estimate_k_with, GapRule};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_model::Partition;
use crate::linalg::{top_k_eigs, EigOptions, SymMatrix};

/// How the number of clusters is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KMode {
    Known(usize),
    /// Estimate from the top `k_max + 1` eigenvalues.
    Auto { k_max: usize },
}

/// Which `ClusterByDistance` implementation runs on the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Cut the `k − 1` heaviest edges of a minimum spanning tree.
    Mst,
    /// Join every pair at distance `≤ delta / 2`.
    Threshold { delta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterOptions {
    pub k_mode: KMode,
    pub variant: Variant,
    pub eig: EigOptions,
    pub gap_rule: GapRule,
}

impl ClusterOptions {
    pub fn new(k_mode: KMode, variant: Variant) -> Self {
        Self {
            k_mode,
            variant,
            eig: EigOptions::default(),
            gap_rule: GapRule::default(),
        }
    }

    pub fn with_eig(self, eig: EigOptions) -> Self {
        Self { eig, ..self }
    }
}

/// Everything the pipeline computed on the way to its partition.
#[derive(Clone, Debug)]
pub struct ClusterRun {
    pub partition: Partition,
    pub k: usize,
    /// Eigenvalues used for k estimation (auto mode only).
    pub spectrum: Option<Vec<f64>>,
    pub embedding: Embedding,
}

/// Embed with the top-k eigenvectors, then cluster by distance.
pub fn vanilla_svd_cluster(adjacency: &SymMatrix, opts: &ClusterOptions) -> Result<Partition> {
    cluster_detailed(adjacency, opts).map(|run| run.partition)
}

/// [`vanilla_svd_cluster`] keeping the intermediate spectrum and embedding.
pub fn cluster_detailed(adjacency: &SymMatrix, opts: &ClusterOptions) -> Result<ClusterRun> {
    let n = adjacency.n();
    let (k, spectrum) = match opts.k_mode {
        KMode::Known(k) => (k, None),
        KMode::Auto { k_max } => {
            if k_max == 0 || k_max >= n {
                return Err(Error::InvalidParameters(format!(
                    "auto k needs 1 <= k_max < n, got k_max = {k_max}, n = {n}"
                )));
            }
            let top = top_k_eigs(adjacency, k_max + 1, &opts.eig)?;
            let k = estimate_k_with(&top.values, k_max, opts.gap_rule)?;
            (k, Some(top.values))
        }
    };
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let embedding = embed(adjacency, k, &opts.eig)?;
    let partition = match opts.variant {
        Variant::Mst => mst_cluster(&embedding, k)?,
        Variant::Threshold { delta } => threshold_cluster(&embedding, delta)?,
    };
    Ok(ClusterRun {
        partition,
        k,
        spectrum,
        embedding,
    })
}
