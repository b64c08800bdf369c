#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vrwalk_core::{Graph, LabeledNodes, Node};

/// Random recursive tree on `n` nodes plus `extra` uniform random edges.
pub fn random_connected_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(Node, Node)> = (1..n)
        .map(|v| (rng.random_range(0..v) as Node, v as Node))
        .collect();
    for _ in 0..extra {
        let u = rng.random_range(0..n) as Node;
        let v = rng.random_range(0..n) as Node;
        edges.push((u, v));
    }
    Graph::from_index_edges(n, &edges, false).unwrap()
}

/// Erdos-Renyi style graph with `m` random edges, no connectivity guarantee.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(Node, Node)> = (0..m)
        .map(|_| {
            (
                rng.random_range(0..n) as Node,
                rng.random_range(0..n) as Node,
            )
        })
        .collect();
    Graph::from_index_edges(n, &edges, false).unwrap()
}

/// Planted-partition graph: `blocks` communities of `size` nodes, each node
/// labeled by its community. A ring through all nodes keeps it connected.
pub fn planted_partition(
    blocks: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> (Graph, LabeledNodes) {
    let n = blocks * size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / size == v / size { p_in } else { p_out };
            if rng.random_bool(p) {
                edges.push((u as Node, v as Node));
            }
        }
    }
    let mut ring: Vec<Node> = (0..n as Node).collect();
    ring.shuffle(&mut rng);
    for w in ring.windows(2) {
        edges.push((w[0], w[1]));
    }
    let graph = Graph::from_index_edges(n, &edges, false).unwrap();
    let mut labels = LabeledNodes {
        label_names: (0..blocks).map(|b| format!("c{b}")).collect(),
        ..Default::default()
    };
    for v in 0..n {
        labels.insert(v as Node, (v / size) as u32);
    }
    (graph, labels)
}

pub fn five_node_toy() -> Graph {
    vrwalk_core::parse_edge_list("1 3\n1 5\n3 4\n4 2\n4 5\n2 5\n".as_bytes(), false).unwrap()
}

/// `k` cliques of `size` nodes chained by single bridge edges.
pub fn clique_chain(k: usize, size: usize) -> Graph {
    let mut edges = Vec::new();
    for c in 0..k {
        let base = c * size;
        for u in 0..size {
            for v in u + 1..size {
                edges.push(((base + u) as Node, (base + v) as Node));
            }
        }
        if c + 1 < k {
            edges.push(((base + size - 1) as Node, (base + size) as Node));
        }
    }
    Graph::from_index_edges(k * size, &edges, false).unwrap()
}

/// One-hot community vectors for [`clique_chain`].
pub fn clique_embeddings(graph: &Graph, k: usize, size: usize) -> vrwalk_core::NodeEmbeddings {
    let mut vectors = vec![0.0; graph.node_count() * k];
    for v in 0..graph.node_count() {
        vectors[v * k + v / size] = 1.0;
    }
    vrwalk_core::NodeEmbeddings::new(graph.ids().to_vec(), k, vectors).unwrap()
}

/// Relative error `|g - g_fd| / max(|g|, |g_fd|)` between the analytic SGNS
/// gradient and central differences, over all parameters (anchor, positive
/// and every negative) taken as one vector.
pub fn sgns_gradient_error(
    anchor: &[f64],
    positive: &[f64],
    negatives: &[Vec<f64>],
    h: f64,
) -> f64 {
    use vrwalk_core::sgns::{sgns_gradient, sgns_loss};
    let d = anchor.len();
    let flat: Vec<f64> = anchor
        .iter()
        .chain(positive)
        .chain(negatives.iter().flatten())
        .copied()
        .collect();
    let loss = |x: &[f64]| {
        let negs: Vec<&[f64]> = x[2 * d..].chunks(d).collect();
        sgns_loss(&x[..d], &x[d..2 * d], &negs)
    };
    let refs: Vec<&[f64]> = negatives.iter().map(|v| v.as_slice()).collect();
    let (ga, gp, gn) = sgns_gradient(anchor, positive, &refs);
    let analytic: Vec<f64> = ga
        .into_iter()
        .chain(gp)
        .chain(gn.into_iter().flatten())
        .collect();
    let numeric: Vec<f64> = (0..flat.len())
        .map(|i| {
            let mut x = flat.clone();
            x[i] = flat[i] + h;
            let up = loss(&x);
            x[i] = flat[i] - h;
            (up - loss(&x)) / (2.0 * h)
        })
        .collect();
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let diff: Vec<f64> = analytic.iter().zip(&numeric).map(|(a, b)| a - b).collect();
    norm(&diff) / norm(&analytic).max(norm(&numeric)).max(f64::MIN_POSITIVE)
}
