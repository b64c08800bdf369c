//! Compact immutable adjacency structure.
//!
//! Nodes are addressed by dense indices `0..N` assigned in order of first
//! appearance in the input. The original tokens are kept so every output file
//! can be written back in terms of the caller's identifiers.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Dense node index.
pub type Node = u32;

/// Unweighted graph in compressed sparse row form.
///
/// Neighbor lists are sorted, deduplicated and free of self-loops. For an
/// undirected graph every edge is stored in both directions.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<Node>,
    directed: bool,
    ids: Vec<String>,
    index: HashMap<String, Node>,
}

impl Graph {
    /// Builds a graph over `ids` from a list of dense-index edges.
    ///
    /// Duplicates and self-loops are dropped. For undirected graphs each pair
    /// is inserted in both directions.
    pub fn from_edges(ids: Vec<String>, edges: &[(Node, Node)], directed: bool) -> Result<Self> {
        let n = ids.len();
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i as Node).is_some() {
                return Err(Error::Invalid(format!("duplicate node id `{id}`")));
            }
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::NodeOutOfRange {
                        index: x as usize,
                        node_count: n,
                    });
                }
            }
            if u == v {
                continue;
            }
            degree[u as usize] += 1;
            if !directed {
                degree[v as usize] += 1;
            }
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0; offsets[n]];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            if !directed {
                neighbors[cursor[v as usize]] = u;
                cursor[v as usize] += 1;
            }
        }

        // Sort and dedupe each row, then compact.
        let mut compact = Vec::with_capacity(neighbors.len());
        let mut new_offsets = Vec::with_capacity(n + 1);
        new_offsets.push(0);
        for v in 0..n {
            let row = &mut neighbors[offsets[v]..offsets[v + 1]];
            row.sort_unstable();
            let mut last = None;
            for &x in row.iter() {
                if last != Some(x) {
                    compact.push(x);
                    last = Some(x);
                }
            }
            new_offsets.push(compact.len());
        }
        compact.shrink_to_fit();

        Ok(Graph {
            offsets: new_offsets,
            neighbors: compact,
            directed,
            ids,
            index,
        })
    }

    /// Convenience constructor with ids `"0".."n-1"`.
    pub fn from_index_edges(
        node_count: usize,
        edges: &[(Node, Node)],
        directed: bool,
    ) -> Result<Self> {
        let ids = (0..node_count).map(|i| i.to_string()).collect();
        Self::from_edges(ids, edges, directed)
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    /// Number of edges M (unordered pairs when undirected).
    pub fn edge_count(&self) -> usize {
        if self.directed {
            self.neighbors.len()
        } else {
            self.neighbors.len() / 2
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn neighbors(&self, v: Node) -> &[Node] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Node) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn external_id(&self, v: Node) -> &str {
        &self.ids[v as usize]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<Node> {
        self.index.get(id).copied()
    }

    /// Iterates edges once each: `(u, v)` with `u < v` when undirected.
    pub fn edges(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        (0..self.node_count() as Node).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| self.directed || u < v)
                .map(move |v| (u, v))
        })
    }

    /// True iff the graph has a single connected component, ignoring edge
    /// direction.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return false;
        }
        let mut sets = DisjointSets::new(n);
        let mut components = n;
        for (u, v) in self.edges() {
            if sets.union(u as usize, v as usize) {
                components -= 1;
            }
        }
        components == 1
    }

    /// Writes one edge per line using external ids.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.external_id(u), self.external_id(v))?;
        }
        Ok(())
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` and blank lines are ignored. Node ids are assigned
/// dense indices in order of first appearance.
pub fn parse_edge_list<R: BufRead>(reader: R, directed: bool) -> Result<Graph> {
    let mut builder = IdTable::default();
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (u, v) = parse_pair(trimmed, lineno)?;
        let u = builder.intern(u);
        let v = builder.intern(v);
        edges.push((u, v));
    }
    if !edges.iter().any(|(u, v)| u != v) {
        return Err(Error::EmptyGraph);
    }
    Graph::from_edges(builder.into_ids(), &edges, directed)
}

pub(crate) fn parse_pair(line: &str, lineno: usize) -> Result<(&str, &str)> {
    let mut tokens = line.split_whitespace();
    match (tokens.next(), tokens.next(), tokens.next()) {
        (Some(u), Some(v), None) => Ok((u, v)),
        (Some(_), Some(_), Some(w)) if w.parse::<f64>().is_ok() => Err(Error::parse(
            lineno,
            "weighted edges are not supported (expected exactly two tokens)",
        )),
        _ => Err(Error::parse(lineno, "expected exactly two node tokens")),
    }
}

/// Assigns dense indices to tokens in first-appearance order.
#[derive(Debug, Default)]
pub(crate) struct IdTable {
    ids: Vec<String>,
    index: HashMap<String, Node>,
}

impl IdTable {
    pub(crate) fn intern(&mut self, token: &str) -> Node {
        if let Some(&i) = self.index.get(token) {
            return i;
        }
        let i = self.ids.len() as Node;
        self.ids.push(token.to_owned());
        self.index.insert(token.to_owned(), i);
        i
    }

    pub(crate) fn into_ids(self) -> Vec<String> {
        self.ids
    }
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}
