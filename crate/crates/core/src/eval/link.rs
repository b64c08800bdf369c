use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::eval::features::EdgeFeatureOp;
use crate::eval::logreg::{fit_logreg, Features, LogRegConfig};
use crate::eval::metrics::auc;
use crate::graph::Node;
use crate::rng;
use crate::sgns::NodeEmbeddings;
use crate::split::{ordered, sample_non_edges, EdgeSplit, Pair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPredictionScore {
    pub op: EdgeFeatureOp,
    pub auc: f64,
}

/// Scores held-out edges against sampled non-edges for each operator.
///
/// The classifier is trained on the residual edges as positives plus an
/// equal number of freshly drawn non-edges that avoid both the original
/// edge set and the split's test negatives.
pub fn link_prediction_eval(
    embeddings: &NodeEmbeddings,
    split: &EdgeSplit,
    ops: &[EdgeFeatureOp],
    seed: u64,
    logreg: &LogRegConfig,
) -> Result<Vec<LinkPredictionScore>> {
    let graph = &split.residual;
    let vectors = embeddings.aligned_to(graph)?;
    let d = embeddings.dim();
    let row = |v: Node| &vectors[v as usize * d..(v as usize + 1) * d];

    if split.test_positive.is_empty() || split.test_negative.is_empty() {
        return Err(Error::Invalid(
            "split has no test pairs of one class".into(),
        ));
    }

    let train_pos: Vec<Pair> = graph.edges().collect();
    let test_pos: HashSet<Pair> = split.test_positive.iter().copied().collect();
    let mut exclude: HashSet<Pair> = split.test_negative.iter().copied().collect();
    exclude.extend(test_pos.iter().copied());
    let n = graph.node_count();
    let available = (n * (n - 1) / 2).saturating_sub(train_pos.len() + exclude.len());
    let mut r = rng::stream(seed, &[rng::TAG_EVAL, 0]);
    let train_neg = sample_non_edges(
        n,
        train_pos.len().min(available),
        |u, v| graph.has_edge(u, v),
        &exclude,
        train_pos.len(),
        &mut r,
    )?;

    let mut train_y = vec![true; train_pos.len()];
    train_y.extend(std::iter::repeat_n(false, train_neg.len()));
    let mut test_y = vec![true; split.test_positive.len()];
    test_y.extend(std::iter::repeat_n(false, split.test_negative.len()));

    let build = |op: EdgeFeatureOp, pairs: &mut dyn Iterator<Item = &Pair>| {
        let mut data = Vec::new();
        for &(u, v) in pairs {
            let (u, v) = ordered(u, v);
            op.extend(row(u), row(v), &mut data);
        }
        data
    };

    ops.iter()
        .map(|&op| {
            let train = build(op, &mut train_pos.iter().chain(&train_neg));
            let model = fit_logreg(Features::new(&train, d)?, &train_y, logreg)?;
            let test = build(
                op,
                &mut split.test_positive.iter().chain(&split.test_negative),
            );
            let x = Features::new(&test, d)?;
            let scores: Vec<f64> = (0..x.rows()).map(|i| model.decision(x.row(i))).collect();
            Ok(LinkPredictionScore {
                op,
                auc: auc(&scores, &test_y)?,
            })
        })
        .collect()
}
