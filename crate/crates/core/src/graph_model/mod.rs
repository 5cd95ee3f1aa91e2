//! The symmetric stochastic block model: parameters, hidden partitions,
//! mean and noise matrices, and seeded sampling.
//!
//! Sampling streams are derived from the instance seed with
//! [`crate::rng::derive_seed`]: substream [`PARTITION_STREAM`] draws the
//! labels and substream [`ADJACENCY_STREAM`] draws the edges. Edges are
//! drawn in row-major order over the upper triangle `i <= j`, one uniform
//! per pair, and an edge is present iff the draw is below `G_ij`.

pub mod io;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::SymMatrix;
use crate::rng::Xoshiro256StarStar;

pub const PARTITION_STREAM: u64 = 0;
pub const ADJACENCY_STREAM: u64 = 1;

/// Rejection cap when drawing a partition with every cluster populated.
const MAX_PARTITION_ATTEMPTS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsbmParams {
    pub n: usize,
    pub k: usize,
    /// Intra-cluster edge probability.
    pub p: f64,
    /// Inter-cluster edge probability.
    pub q: f64,
    pub seed: u64,
}

impl SsbmParams {
    pub fn new(n: usize, k: usize, p: f64, q: f64, seed: u64) -> Result<Self> {
        let params = Self { n, k, p, q, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameters("n must be positive".into()));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= k <= n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameters(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Clustering needs `p > q`.
    pub fn require_separated(&self) -> Result<()> {
        if self.p > self.q {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!(
                "clustering needs p > q, got p = {}, q = {}",
                self.p, self.q
            )))
        }
    }

    /// `σ² = max{p(1 − p), q(1 − q)}`.
    pub fn sigma_squared(&self) -> f64 {
        (self.p * (1.0 - self.p)).max(self.q * (1.0 - self.q))
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_squared().sqrt()
    }

    /// `μ = (p − q) n / k`.
    pub fn mu(&self) -> f64 {
        (self.p - self.q) * self.n as f64 / self.k as f64
    }

    /// Clear-cut threshold `Δ = 0.8 (p − q) √(n/k)`.
    pub fn delta(&self) -> f64 {
        0.8 * (self.p - self.q) * (self.n as f64 / self.k as f64).sqrt()
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Assignment of `n` vertices to `k` clusters. Labels are 0-based here;
/// the partition file format shifts them to `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    /// Partition with labels in `0..k`. Clusters may be empty.
    pub fn new(k: usize, assignment: Vec<usize>) -> Result<Self> {
        let mut sizes = vec![0; k];
        for (u, &l) in assignment.iter().enumerate() {
            if l >= k {
                return Err(Error::InvalidParameters(format!(
                    "vertex {u} has label {l}, outside 0..{k}"
                )));
            }
            sizes[l] += 1;
        }
        Ok(Self { assignment, sizes })
    }

    /// `k` is one more than the largest label.
    pub fn from_labels(assignment: Vec<usize>) -> Self {
        let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
        Self::new(k, assignment).expect("labels bounded by construction")
    }

    /// Contiguous clusters with the given sizes.
    pub fn from_sizes(sizes: &[usize]) -> Self {
        let assignment = sizes
            .iter()
            .enumerate()
            .flat_map(|(l, &s)| std::iter::repeat_n(l, s))
            .collect();
        Self {
            assignment,
            sizes: sizes.to_vec(),
        }
    }

    /// The most even contiguous partition: sizes `⌈n/k⌉` for the first
    /// `n mod k` clusters and `⌊n/k⌋` for the rest.
    pub fn equal_sizes(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= k <= n, got k = {k}, n = {n}"
            )));
        }
        let sizes: Vec<usize> = (0..k).map(|l| n / k + usize::from(l < n % k)).collect();
        Ok(Self::from_sizes(&sizes))
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn label(&self, u: usize) -> usize {
        self.assignment[u]
    }

    pub fn same_cluster(&self, u: usize, v: usize) -> bool {
        self.assignment[u] == self.assignment[v]
    }

    /// Size of the cluster containing `u`.
    pub fn size_of(&self, u: usize) -> usize {
        self.sizes[self.assignment[u]]
    }

    pub fn members(&self, label: usize) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.assignment[u] == label).collect()
    }

    pub fn nonempty_clusters(&self) -> usize {
        self.sizes.iter().filter(|&&s| s > 0).count()
    }

    /// Renames label `l` to `perm[l]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        check_dim(self.k(), perm.len())?;
        Self::new(
            self.k(),
            self.assignment.iter().map(|&l| perm[l]).collect(),
        )
    }
}

/// Draws each label independently and uniformly from `0..k`, redrawing the
/// whole assignment (from the same stream) until every cluster is nonempty.
pub fn sample_partition(params: &SsbmParams) -> Result<Partition> {
    params.validate()?;
    let mut rng = Xoshiro256StarStar::stream(params.seed, PARTITION_STREAM);
    for _ in 0..MAX_PARTITION_ATTEMPTS {
        let assignment: Vec<usize> = (0..params.n)
            .map(|_| rng.below(params.k as u64) as usize)
            .collect();
        let partition = Partition::new(params.k, assignment)?;
        if partition.sizes.iter().all(|&s| s > 0) {
            return Ok(partition);
        }
    }
    Err(Error::InvalidParameters(format!(
        "could not populate all {} clusters of {} vertices in {MAX_PARTITION_ATTEMPTS} draws",
        params.k, params.n
    )))
}

/// Whether every size lies within `(1 ± 1/(16 ln n)) n/k`.
pub fn is_balanced(partition: &Partition) -> bool {
    let n = partition.n();
    let k = partition.k();
    if k == 0 {
        return false;
    }
    let ln_n = (n as f64).ln();
    if ln_n <= 0.0 {
        return true;
    }
    let target = n as f64 / k as f64;
    let slack = 1.0 / (16.0 * ln_n);
    let (lo, hi) = ((1.0 - slack) * target, (1.0 + slack) * target);
    partition
        .sizes()
        .iter()
        .all(|&s| (lo..=hi).contains(&(s as f64)))
}

/// `G_uv = p` within a cluster (diagonal included), `q` across clusters.
pub fn mean_matrix(partition: &Partition, p: f64, q: f64) -> SymMatrix {
    SymMatrix::from_upper_fn(partition.n(), |u, v| {
        if partition.same_cluster(u, v) {
            p
        } else {
            q
        }
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyOptions {
    /// Force `Ĝ_uu = 0`. The diagonal draws are still consumed, so the
    /// off-diagonal edges match the default mode for the same seed.
    pub zero_diagonal: bool,
}

pub fn sample_adjacency(partition: &Partition, p: f64, q: f64, seed: u64) -> SymMatrix {
    sample_adjacency_with(partition, p, q, seed, AdjacencyOptions::default())
}

pub fn sample_adjacency_with(
    partition: &Partition,
    p: f64,
    q: f64,
    seed: u64,
    opts: AdjacencyOptions,
) -> SymMatrix {
    let mut rng = Xoshiro256StarStar::stream(seed, ADJACENCY_STREAM);
    SymMatrix::from_upper_fn(partition.n(), |u, v| {
        let prob = if partition.same_cluster(u, v) { p } else { q };
        let edge = rng.bernoulli(prob);
        if edge && !(opts.zero_diagonal && u == v) {
            1.0
        } else {
            0.0
        }
    })
}

/// `E = Ĝ − G`.
pub fn noise_matrix(adjacency: &SymMatrix, mean: &SymMatrix) -> Result<SymMatrix> {
    adjacency.sub(mean)
}

/// One sampled model instance with its hidden structure.
#[derive(Clone, Debug)]
pub struct SsbmInstance {
    pub params: SsbmParams,
    pub partition: Partition,
    pub mean: SymMatrix,
    pub adjacency: SymMatrix,
}

impl SsbmInstance {
    pub fn sample(params: &SsbmParams, opts: AdjacencyOptions) -> Result<Self> {
        let partition = sample_partition(params)?;
        let mean = mean_matrix(&partition, params.p, params.q);
        let adjacency = sample_adjacency_with(&partition, params.p, params.q, params.seed, opts);
        Ok(Self {
            params: *params,
            partition,
            mean,
            adjacency,
        })
    }

    pub fn noise(&self) -> SymMatrix {
        noise_matrix(&self.adjacency, &self.mean).expect("same dimension by construction")
    }
}
