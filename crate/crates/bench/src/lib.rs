//! Fixtures shared by the benchmarks.

use rand::Rng;
use vrwalk_core::{rng, Graph, Node};

/// Connected random graph: a random recursive tree plus `extra` uniform
/// edges, so the mean degree is about `2 * (n - 1 + extra) / n`.
pub fn random_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let mut r = rng::stream(seed, &[]);
    let mut edges: Vec<(Node, Node)> = (1..n)
        .map(|v| (r.random_range(0..v) as Node, v as Node))
        .collect();
    edges.extend((0..extra).map(|_| (r.random_range(0..n) as Node, r.random_range(0..n) as Node)));
    Graph::from_index_edges(n, &edges, false).expect("n >= 2")
}
