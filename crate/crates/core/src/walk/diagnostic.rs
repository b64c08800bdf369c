//! Stuck-set diagnostics for long walks.

use std::collections::HashMap;
use std::io::Write;

use crate::error::Result;
use crate::graph::{Graph, Node};

/// Node frequencies inside the trailing window that ends at a checkpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckpointReport {
    /// Step index `n` of the last node in the window.
    pub step: usize,
    pub distinct: usize,
    /// `(node, count)` sorted by descending count, then node.
    pub frequencies: Vec<(Node, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostic {
    pub reports: Vec<CheckpointReport>,
    /// Checkpoints the path was too short to reach.
    pub skipped: Vec<usize>,
}

/// For each checkpoint `c`, counts the nodes `X(c - window + 1) ..= X(c)`.
pub fn stuck_diagnostic(path: &[Node], window: usize, checkpoints: &[usize]) -> Diagnostic {
    let mut out = Diagnostic::default();
    for &c in checkpoints {
        if c >= path.len() || c + 1 < window || window == 0 {
            out.skipped.push(c);
            continue;
        }
        let mut counts: HashMap<Node, usize> = HashMap::new();
        for &v in &path[c + 1 - window..=c] {
            *counts.entry(v).or_default() += 1;
        }
        let mut frequencies: Vec<_> = counts.into_iter().collect();
        frequencies.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        out.reports.push(CheckpointReport {
            step: c,
            distinct: frequencies.len(),
            frequencies,
        });
    }
    out
}

impl Diagnostic {
    /// CSV rows: `checkpoint_step,distinct_nodes,node:frequency,...`.
    pub fn write_csv<W: Write>(&self, graph: &Graph, mut out: W) -> Result<()> {
        writeln!(out, "checkpoint_step,distinct_nodes,frequencies")?;
        for r in &self.reports {
            write!(out, "{},{}", r.step, r.distinct)?;
            for (v, f) in &r.frequencies {
                write!(out, ",{}:{}", graph.external_id(*v), f)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
