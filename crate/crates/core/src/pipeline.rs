//! End-to-end runs: walk corpus, skip-gram training, evaluation.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::{
    link_prediction_eval, node_classification_eval, EdgeFeatureOp, LabeledNodes, LogRegConfig,
};
use crate::graph::Graph;
use crate::sgns::{self, NodeEmbeddings, SgnsConfig};
use crate::split::EdgeSplit;
use crate::walk::{generate_corpus, Corpus, Exploitation, Exploration, WalkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub walk: WalkConfig,
    pub sgns: SgnsConfig,
    pub logreg: LogRegConfig,
    /// Master seed; overrides the walk and trainer seeds.
    pub seed: u64,
    pub workers: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            walk: WalkConfig::default(),
            sgns: SgnsConfig::default(),
            logreg: LogRegConfig::default(),
            seed: 0,
            workers: 1,
        }
    }
}

impl PipelineConfig {
    /// Walk and trainer configs with the master seed and worker count applied.
    pub fn resolved(&self) -> (WalkConfig, SgnsConfig) {
        let walk = WalkConfig {
            seed: self.seed,
            ..self.walk
        };
        let sgns = SgnsConfig {
            seed: self.seed,
            workers: self.workers,
            ..self.sgns
        };
        (walk, sgns)
    }
}

/// Generates the walk corpus and trains embeddings for every node.
pub fn embed_graph(graph: &Graph, config: &PipelineConfig) -> Result<(NodeEmbeddings, Corpus)> {
    let (walk, sgns_cfg) = config.resolved();
    let corpus = generate_corpus(graph, &walk, config.workers)?;
    let matrix = sgns::train(&corpus, graph.node_count(), &sgns_cfg)?;
    Ok((matrix.to_node_embeddings(graph)?, corpus))
}

/// One walk variant in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    pub exploitation: Exploitation,
    pub exploration: Exploration,
}

impl Variant {
    /// Cartesian product; epsilon-greedy expands over `epsilons`.
    pub fn grid(
        exploitations: &[Exploitation],
        explorations: &[&str],
        epsilons: &[f64],
    ) -> Result<Vec<Variant>> {
        let mut out = Vec::new();
        for &exploitation in exploitations {
            for &name in explorations {
                if name == "epsilon-greedy" {
                    for &e in epsilons {
                        out.push(Variant {
                            exploitation,
                            exploration: Exploration::from_parts(name, Some(e))?,
                        });
                    }
                } else {
                    out.push(Variant {
                        exploitation,
                        exploration: Exploration::from_parts(name, None)?,
                    });
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Task<'a> {
    NodeClassification {
        graph: &'a Graph,
        labels: &'a LabeledNodes,
        train_fraction: f64,
        /// Also emit a Macro-F1 row per variant.
        with_macro: bool,
    },
    LinkPrediction {
        split: &'a EdgeSplit,
        ops: &'a [EdgeFeatureOp],
    },
}

/// One line of a results table. `value` is a fraction in `[0, 1]`; the CSV
/// writer reports it as a percentage with one decimal.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub dataset: String,
    pub exploitation: Exploitation,
    pub exploration: Exploration,
    pub target: String,
    pub metric: &'static str,
    pub value: f64,
    pub seed: u64,
}

/// Embeds the task's graph with `variant` and evaluates it.
pub fn run_variant(
    dataset: &str,
    task: Task<'_>,
    variant: Variant,
    base: &PipelineConfig,
) -> Result<Vec<ResultRow>> {
    let config = PipelineConfig {
        walk: WalkConfig {
            exploitation: variant.exploitation,
            exploration: variant.exploration,
            ..base.walk
        },
        ..*base
    };
    let row = |target: String, metric, value| ResultRow {
        dataset: dataset.to_owned(),
        exploitation: variant.exploitation,
        exploration: variant.exploration,
        target,
        metric,
        value,
        seed: config.seed,
    };
    match task {
        Task::NodeClassification {
            graph,
            labels,
            train_fraction,
            with_macro,
        } => {
            let (emb, _) = embed_graph(graph, &config)?;
            let report = node_classification_eval(
                &emb,
                graph,
                labels,
                train_fraction,
                config.seed,
                &config.logreg,
                config.workers,
            )?;
            let target = format!("train={train_fraction}");
            let mut rows = vec![row(target.clone(), "micro-f1", report.scores.micro)];
            if with_macro {
                rows.push(row(target, "macro-f1", report.scores.macro_));
            }
            Ok(rows)
        }
        Task::LinkPrediction { split, ops } => {
            let (emb, _) = embed_graph(&split.residual, &config)?;
            let scores = link_prediction_eval(&emb, split, ops, config.seed, &config.logreg)?;
            Ok(scores
                .into_iter()
                .map(|s| row(s.op.name().to_owned(), "auc", s.auc))
                .collect())
        }
    }
}

/// Runs every variant with the same master seed.
pub fn variant_sweep(
    dataset: &str,
    task: Task<'_>,
    variants: &[Variant],
    base: &PipelineConfig,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for &v in variants {
        rows.extend(run_variant(dataset, task, v, base)?);
    }
    Ok(rows)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    dataset: &'a str,
    exploitation: String,
    exploration: &'static str,
    epsilon: String,
    operator_or_split: &'a str,
    metric: &'a str,
    value: String,
    seed: u64,
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(CsvRow {
            dataset: &r.dataset,
            exploitation: r.exploitation.to_string(),
            exploration: r.exploration.name(),
            epsilon: r
                .exploration
                .epsilon()
                .map(|e| e.to_string())
                .unwrap_or_default(),
            operator_or_split: &r.target,
            metric: r.metric,
            value: format!("{:.1}", 100.0 * r.value),
            seed: r.seed,
        })?;
    }
    w.flush()?;
    Ok(())
}
