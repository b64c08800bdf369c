//! Edge hold-out for link prediction.
//!
//! A uniformly random spanning tree is drawn first (Wilson's algorithm) and
//! only non-tree edges are eligible for removal, so the residual graph stays
//! connected without retries.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{parse_pair, Graph, IdTable, Node};
use crate::rng;

/// Unordered node pair with `0 <= u < v`.
pub type Pair = (Node, Node);

#[inline]
pub(crate) fn ordered(u: Node, v: Node) -> Pair {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Residual training graph plus held-out positives and sampled negatives.
///
/// All pairs index into the residual graph, which shares the node table of
/// the original graph.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    pub residual: Graph,
    pub test_positive: Vec<Pair>,
    pub test_negative: Vec<Pair>,
    pub requested_fraction: f64,
    pub achieved_fraction: f64,
}

impl EdgeSplit {
    /// True when fewer edges were removed than requested because the
    /// spanning tree pinned the rest.
    pub fn is_partial(&self) -> bool {
        let total = self.residual.edge_count() + self.test_positive.len();
        self.test_positive.len() < removal_target(total, self.requested_fraction)
    }

    /// Writes the `%residual` / `%pos` / `%neg` manifest.
    pub fn write_manifest<W: Write>(&self, mut out: W) -> Result<()> {
        let g = &self.residual;
        writeln!(
            out,
            "# requested_fraction={} achieved_fraction={}",
            self.requested_fraction, self.achieved_fraction
        )?;
        writeln!(out, "%residual")?;
        g.write_edge_list(&mut out)?;
        writeln!(out, "%pos")?;
        for &(u, v) in &self.test_positive {
            writeln!(out, "{} {}", g.external_id(u), g.external_id(v))?;
        }
        writeln!(out, "%neg")?;
        for &(u, v) in &self.test_negative {
            writeln!(out, "{} {}", g.external_id(u), g.external_id(v))?;
        }
        Ok(())
    }

    /// Reads a manifest written by [`EdgeSplit::write_manifest`].
    pub fn read_manifest<R: BufRead>(reader: R) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Residual,
            Pos,
            Neg,
        }
        let mut section = Section::None;
        let mut ids = IdTable::default();
        let mut residual = Vec::new();
        let mut raw_pos = Vec::new();
        let mut raw_neg = Vec::new();
        let mut requested = None;

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(comment) = t.strip_prefix('#') {
                for kv in comment.split_whitespace() {
                    if let Some(v) = kv.strip_prefix("requested_fraction=") {
                        requested = v.parse::<f64>().ok();
                    }
                }
                continue;
            }
            match t {
                "%residual" => section = Section::Residual,
                "%pos" => section = Section::Pos,
                "%neg" => section = Section::Neg,
                _ => {
                    let (u, v) = parse_pair(t, lineno)?;
                    match section {
                        Section::None => {
                            return Err(Error::parse(lineno, "edge before any section header"))
                        }
                        Section::Residual => residual.push((ids.intern(u), ids.intern(v))),
                        Section::Pos => raw_pos.push((lineno, u.to_owned(), v.to_owned())),
                        Section::Neg => raw_neg.push((lineno, u.to_owned(), v.to_owned())),
                    }
                }
            }
        }
        if residual.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let graph = Graph::from_edges(ids.into_ids(), &residual, false)?;
        let resolve = |raw: Vec<(usize, String, String)>| -> Result<Vec<Pair>> {
            raw.into_iter()
                .map(|(_, u, v)| {
                    let iu = graph
                        .index_of(&u)
                        .ok_or_else(|| Error::UnknownNode(u.clone()))?;
                    let iv = graph
                        .index_of(&v)
                        .ok_or_else(|| Error::UnknownNode(v.clone()))?;
                    Ok(ordered(iu, iv))
                })
                .collect()
        };
        let test_positive = resolve(raw_pos)?;
        let test_negative = resolve(raw_neg)?;
        let total = graph.edge_count() + test_positive.len();
        let achieved = test_positive.len() as f64 / total as f64;
        Ok(EdgeSplit {
            residual: graph,
            test_positive,
            test_negative,
            requested_fraction: requested.unwrap_or(achieved),
            achieved_fraction: achieved,
        })
    }
}

fn removal_target(edge_count: usize, fraction: f64) -> usize {
    (fraction * edge_count as f64).round() as usize
}

/// Removes `fraction` of the edges of a connected undirected graph while
/// keeping the residual connected, and samples an equal number of non-edges.
pub fn split_edges(graph: &Graph, fraction: f64, seed: u64) -> Result<EdgeSplit> {
    if graph.is_directed() {
        return Err(Error::Directed);
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!(
            "split fraction must lie in (0, 1), got {fraction}"
        )));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut rng = rng::stream(seed, &[rng::TAG_SPLIT]);

    let tree: HashSet<Pair> = random_spanning_tree(graph, &mut rng)
        .into_iter()
        .map(|(u, v)| ordered(u, v))
        .collect();
    let mut removable: Vec<Pair> = graph.edges().filter(|e| !tree.contains(e)).collect();

    let m = graph.edge_count();
    let target = removal_target(m, fraction);
    let take = target.min(removable.len());
    let (chosen, _) = removable.partial_shuffle(&mut rng, take);
    let mut test_positive = chosen.to_vec();
    test_positive.sort_unstable();

    let removed: HashSet<Pair> = test_positive.iter().copied().collect();
    let kept: Vec<Pair> = graph.edges().filter(|e| !removed.contains(e)).collect();
    let residual = Graph::from_edges(graph.ids().to_vec(), &kept, false)?;

    // Near-complete graphs cannot supply a negative for every positive.
    let non_edges = (graph.node_count() * (graph.node_count() - 1) / 2).saturating_sub(m);
    let test_negative = sample_non_edges(
        graph.node_count(),
        test_positive.len().min(non_edges),
        |u, v| graph.has_edge(u, v),
        &HashSet::new(),
        m,
        &mut rng,
    )?;

    Ok(EdgeSplit {
        residual,
        test_positive,
        test_negative,
        requested_fraction: fraction,
        achieved_fraction: take as f64 / m as f64,
    })
}

/// Draws a uniformly random spanning tree of a connected undirected graph
/// using loop-erased random walks.
pub fn random_spanning_tree<R: Rng>(graph: &Graph, rng: &mut R) -> Vec<Pair> {
    let n = graph.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut next = vec![Node::MAX; n];
    let root = rng.random_range(0..n);
    in_tree[root] = true;
    let mut edges = Vec::with_capacity(n - 1);

    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let nbrs = graph.neighbors(u as Node);
            let v = nbrs[rng.random_range(0..nbrs.len())];
            next[u] = v;
            u = v as usize;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            let v = next[u];
            edges.push((u as Node, v));
            u = v as usize;
        }
    }
    edges
}

/// Rejection-samples `count` distinct unordered non-adjacent pairs.
///
/// `is_edge` decides adjacency in the reference graph and `exclude` holds
/// pairs that must not be returned either.
pub(crate) fn sample_non_edges<R: Rng>(
    node_count: usize,
    count: usize,
    is_edge: impl Fn(Node, Node) -> bool,
    exclude: &HashSet<Pair>,
    edge_count: usize,
    rng: &mut R,
) -> Result<Vec<Pair>> {
    let all_pairs = node_count * node_count.saturating_sub(1) / 2;
    let available = all_pairs.saturating_sub(edge_count + exclude.len());
    if count > available {
        return Err(Error::NotEnoughNonEdges {
            requested: count,
            available,
        });
    }
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rng.random_range(0..node_count) as Node;
        let v = rng.random_range(0..node_count) as Node;
        if u == v {
            continue;
        }
        let p = ordered(u, v);
        if is_edge(p.0, p.1) || exclude.contains(&p) || !seen.insert(p) {
            continue;
        }
        out.push(p);
    }
    Ok(out)
}
