use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::labels::LabeledNodes;
use crate::eval::logreg::{fit_logreg, Features, LogRegConfig};
use crate::eval::metrics::{multilabel_f1, F1Scores};
use crate::graph::{Graph, Node};
use crate::rng;
use crate::sgns::NodeEmbeddings;

#[derive(Debug, Clone, PartialEq)]
pub struct NodeClassificationReport {
    pub scores: F1Scores,
    pub train_nodes: usize,
    pub test_nodes: usize,
    /// Labels with no positive training example; they are never predicted.
    pub unpredictable_labels: Vec<u32>,
}

/// One-vs-rest multi-label classification on node embeddings.
///
/// Labeled nodes are split uniformly at random. The split is drawn over
/// nodes ordered by external id, so it depends only on the seed and the set
/// of labeled nodes, not on input order. Each test node with `k` true labels
/// is assigned its `k` highest-scoring labels.
pub fn node_classification_eval(
    embeddings: &NodeEmbeddings,
    graph: &Graph,
    labels: &LabeledNodes,
    train_fraction: f64,
    seed: u64,
    logreg: &LogRegConfig,
    workers: usize,
) -> Result<NodeClassificationReport> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Config(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut nodes: Vec<(&str, Node)> = labels
        .labels
        .keys()
        .map(|&v| (graph.external_id(v), v))
        .collect();
    if nodes.len() < 2 {
        return Err(Error::Invalid("need at least two labeled nodes".into()));
    }
    nodes.sort_unstable();
    let mut order: Vec<Node> = nodes.into_iter().map(|(_, v)| v).collect();
    order.shuffle(&mut rng::stream(seed, &[rng::TAG_EVAL, 1]));
    let n_train =
        ((train_fraction * order.len() as f64).round() as usize).clamp(1, order.len() - 1);
    let (train, test) = order.split_at(n_train);

    let d = embeddings.dim();
    let gather = |set: &[Node]| -> Result<Vec<f64>> {
        let mut data = Vec::with_capacity(set.len() * d);
        for &v in set {
            let id = graph.external_id(v);
            let row = embeddings
                .get(id)
                .ok_or_else(|| Error::UnknownNode(id.to_owned()))?;
            data.extend_from_slice(row);
        }
        Ok(data)
    };
    let train_x = gather(train)?;
    let test_x = gather(test)?;
    let train_f = Features::new(&train_x, d)?;
    let test_f = Features::new(&test_x, d)?;

    let label_count = labels.label_count();
    let fit_one = |l: u32| -> Result<Vec<f64>> {
        let y: Vec<bool> = train
            .iter()
            .map(|v| labels.labels[v].contains(&l))
            .collect();
        if !y.iter().any(|&b| b) {
            return Ok(vec![f64::NEG_INFINITY; test.len()]);
        }
        if y.iter().all(|&b| b) {
            return Ok(vec![f64::INFINITY; test.len()]);
        }
        let model = fit_logreg(train_f, &y, logreg)?;
        Ok((0..test.len())
            .map(|i| model.decision(test_f.row(i)))
            .collect())
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let per_label: Vec<Vec<f64>> = pool.install(|| {
        (0..label_count as u32)
            .into_par_iter()
            .map(fit_one)
            .collect::<Result<_>>()
    })?;

    let unpredictable_labels: Vec<u32> = (0..label_count as u32)
        .filter(|&l| !train.iter().any(|v| labels.labels[v].contains(&l)))
        .collect();

    let mut truth = Vec::with_capacity(test.len());
    let mut predicted = Vec::with_capacity(test.len());
    for (i, v) in test.iter().enumerate() {
        let true_labels = &labels.labels[v];
        let mut ranked: Vec<u32> = (0..label_count as u32)
            .filter(|l| per_label[*l as usize][i] != f64::NEG_INFINITY)
            .collect();
        ranked.sort_by(|&a, &b| {
            per_label[b as usize][i]
                .total_cmp(&per_label[a as usize][i])
                .then(a.cmp(&b))
        });
        ranked.truncate(true_labels.len());
        truth.push(true_labels.clone());
        predicted.push(ranked);
    }

    Ok(NodeClassificationReport {
        scores: multilabel_f1(&truth, &predicted, label_count),
        train_nodes: train.len(),
        test_nodes: test.len(),
        unpredictable_labels,
    })
}
