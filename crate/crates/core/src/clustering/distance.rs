use petgraph::unionfind::UnionFind;

use super::Embedding;
use crate::error::{Error, Result};
use crate::graph_model::Partition;

/// Labels the components of `uf` in order of their smallest vertex.
fn label_components(uf: &UnionFind<usize>, n: usize) -> Partition {
    let mut root_label = vec![usize::MAX; n];
    let mut next = 0;
    let assignment = (0..n)
        .map(|u| {
            let r = uf.find(u);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            root_label[r]
        })
        .collect();
    Partition::from_labels(assignment)
}

/// Connected components of the graph joining every pair at distance
/// `≤ delta / 2`.
pub fn threshold_cluster(embedding: &Embedding, delta: f64) -> Result<Partition> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "threshold delta must be positive and finite, got {delta}"
        )));
    }
    let n = embedding.n();
    let radius = delta / 2.0;
    let mut uf = UnionFind::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if embedding.distance(u, v) <= radius {
                uf.union(u, v);
            }
        }
    }
    Ok(label_components(&uf, n))
}

/// Minimum spanning tree on the complete Euclidean graph via dense Prim.
/// Returns edges `(a, b, w)` with `a < b`.
fn prim(embedding: &Embedding) -> Vec<(usize, usize, f64)> {
    let n = embedding.n();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n == 0 {
        return edges;
    }
    best[0] = 0.0;
    for _ in 0..n {
        // Strict comparison keeps the smallest index among ties.
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        if parent[u] != usize::MAX {
            let p = parent[u];
            edges.push((p.min(u), p.max(u), best[u]));
        }
        for v in 0..n {
            if !in_tree[v] {
                let d = embedding.distance(u, v);
                if d < best[v] {
                    best[v] = d;
                    parent[v] = u;
                }
            }
        }
    }
    edges
}

/// Cuts the `k − 1` heaviest MST edges. Ties go to the lexicographically
/// smallest `(min, max)` endpoint pair.
pub fn mst_cluster(embedding: &Embedding, k: usize) -> Result<Partition> {
    let n = embedding.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let mut edges = prim(embedding);
    edges.sort_by(|x, y| y.2.total_cmp(&x.2).then((x.0, x.1).cmp(&(y.0, y.1))));
    let mut uf = UnionFind::new(n);
    for &(a, b, _) in &edges[k - 1..] {
        uf.union(a, b);
    }
    Ok(label_components(&uf, n))
}
