use std::collections::BTreeMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{Graph, IdTable, Node};

/// Multi-label node annotations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledNodes {
    /// Sorted, deduplicated label indices per labeled node.
    pub labels: BTreeMap<Node, Vec<u32>>,
    /// Original label tokens, indexed by label index.
    pub label_names: Vec<String>,
}

impl LabeledNodes {
    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn insert(&mut self, node: Node, label: u32) {
        let set = self.labels.entry(node).or_default();
        if let Err(pos) = set.binary_search(&label) {
            set.insert(pos, label);
        }
    }
}

/// Parses `node label [label ...]` lines. Repeated lines for a node merge.
pub fn parse_labels<R: BufRead>(reader: R, graph: &Graph) -> Result<LabeledNodes> {
    let mut names = IdTable::default();
    let mut out = LabeledNodes::default();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut fields = t.split_whitespace();
        let node = fields.next().unwrap();
        let v = graph.index_of(node).ok_or_else(|| {
            Error::parse(lineno + 1, format!("node `{node}` is not in the graph"))
        })?;
        let mut any = false;
        for label in fields {
            out.insert(v, names.intern(label));
            any = true;
        }
        if !any {
            return Err(Error::parse(lineno + 1, "node has no labels"));
        }
    }
    out.label_names = names.into_ids();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let g = Graph::from_index_edges(3, &[(0, 1), (1, 2)], false).unwrap();
        let l = parse_labels("0 x y\n1 y\n0 z x\n".as_bytes(), &g).unwrap();
        assert_eq!(l.label_names, ["x", "y", "z"]);
        assert_eq!(l.labels[&0], vec![0, 1, 2]);
        assert_eq!(l.labels[&1], vec![1]);
        assert!(!l.labels.contains_key(&2));
    }

    #[test]
    fn unknown_node_or_empty_set() {
        let g = Graph::from_index_edges(2, &[(0, 1)], false).unwrap();
        assert!(parse_labels("7 a\n".as_bytes(), &g).is_err());
        assert!(parse_labels("0\n".as_bytes(), &g).is_err());
    }
}
