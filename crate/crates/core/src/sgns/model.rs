//! Embedding matrices and the skip-gram negative-sampling objective.

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};

/// Input vectors `z` and context vectors `z'`, both `N x d`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    dim: usize,
    input: Vec<f64>,
    context: Vec<f64>,
}

impl EmbeddingMatrix {
    pub fn zeros(node_count: usize, dim: usize) -> Self {
        EmbeddingMatrix {
            dim,
            input: vec![0.0; node_count * dim],
            context: vec![0.0; node_count * dim],
        }
    }

    pub fn from_parts(dim: usize, input: Vec<f64>, context: Vec<f64>) -> Result<Self> {
        if dim == 0 || !input.len().is_multiple_of(dim) || input.len() != context.len() {
            return Err(Error::Invalid("inconsistent embedding matrix shape".into()));
        }
        Ok(EmbeddingMatrix {
            dim,
            input,
            context,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.input.len() / self.dim
    }

    pub fn input(&self, v: Node) -> &[f64] {
        let v = v as usize;
        &self.input[v * self.dim..(v + 1) * self.dim]
    }

    pub fn context(&self, v: Node) -> &[f64] {
        let v = v as usize;
        &self.context[v * self.dim..(v + 1) * self.dim]
    }

    pub fn input_mut(&mut self, v: Node) -> &mut [f64] {
        let v = v as usize;
        &mut self.input[v * self.dim..(v + 1) * self.dim]
    }

    pub fn context_mut(&mut self, v: Node) -> &mut [f64] {
        let v = v as usize;
        &mut self.context[v * self.dim..(v + 1) * self.dim]
    }

    /// Final node embeddings (input vectors only), labelled with `graph`'s ids.
    pub fn to_node_embeddings(&self, graph: &Graph) -> Result<NodeEmbeddings> {
        if graph.node_count() != self.node_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.node_count(),
                actual: self.node_count(),
            });
        }
        NodeEmbeddings::new(graph.ids().to_vec(), self.dim, self.input.clone())
    }
}

/// Named node vectors as persisted to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeEmbeddings {
    ids: Vec<String>,
    dim: usize,
    vectors: Vec<f64>,
    index: std::collections::HashMap<String, usize>,
}

impl NodeEmbeddings {
    pub fn new(ids: Vec<String>, dim: usize, vectors: Vec<f64>) -> Result<Self> {
        if vectors.len() != ids.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: ids.len() * dim,
                actual: vectors.len(),
            });
        }
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Ok(NodeEmbeddings {
            ids,
            dim,
            vectors,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn get(&self, id: &str) -> Option<&[f64]> {
        self.index.get(id).map(|&i| self.row(i))
    }

    /// Rows reordered to `graph`'s dense indices. Fails if any graph node
    /// has no vector.
    pub fn aligned_to(&self, graph: &Graph) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(graph.node_count() * self.dim);
        for id in graph.ids() {
            let row = self.get(id).ok_or_else(|| Error::UnknownNode(id.clone()))?;
            out.extend_from_slice(row);
        }
        Ok(out)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln sigma(x)` without overflow.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Full-softmax skip-gram probabilities `p(x | t)` over every node `x`,
/// using input vectors on both sides. Only practical at toy scale.
pub fn skipgram_distribution(embeddings: &EmbeddingMatrix, t: Node) -> Vec<f64> {
    let zt = embeddings.input(t);
    let logits: Vec<f64> = (0..embeddings.node_count() as Node)
        .map(|k| dot(zt, embeddings.input(k)))
        .collect();
    crate::walk::transition_distribution(&logits)
}

pub fn skipgram_probability(embeddings: &EmbeddingMatrix, t: Node, x: Node) -> f64 {
    skipgram_distribution(embeddings, t)[x as usize]
}

/// `-ln sigma(z_t . z'_x) - sum_k ln sigma(-z_t . z'_k)`.
pub fn sgns_loss(anchor: &[f64], positive: &[f64], negatives: &[&[f64]]) -> f64 {
    -log_sigmoid(dot(anchor, positive))
        - negatives
            .iter()
            .map(|n| log_sigmoid(-dot(anchor, n)))
            .sum::<f64>()
}

/// Analytic gradient of [`sgns_loss`] with respect to the anchor, the
/// positive context vector and each negative context vector.
pub fn sgns_gradient(
    anchor: &[f64],
    positive: &[f64],
    negatives: &[&[f64]],
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let d = anchor.len();
    let mut g_anchor = vec![0.0; d];
    let gp = sigmoid(dot(anchor, positive)) - 1.0;
    let g_pos: Vec<f64> = anchor.iter().map(|a| gp * a).collect();
    for (ga, p) in g_anchor.iter_mut().zip(positive) {
        *ga += gp * p;
    }
    let mut g_negs = Vec::with_capacity(negatives.len());
    for n in negatives {
        let gn = sigmoid(dot(anchor, n));
        for (ga, x) in g_anchor.iter_mut().zip(n.iter()) {
            *ga += gn * x;
        }
        g_negs.push(anchor.iter().map(|a| gn * a).collect());
    }
    (g_anchor, g_pos, g_negs)
}

/// One SGD update on a single (anchor, target) term, word2vec style.
///
/// `label` is 1 for the observed context and 0 for a noise sample. The
/// context row is updated in place and the anchor's step is accumulated into
/// `anchor_step` so the anchor is updated once after all targets. Returns
/// the term's loss.
#[inline]
pub(crate) fn sgd_term(
    anchor: &[f64],
    context: &mut [f64],
    label: f64,
    lr: f64,
    anchor_step: &mut [f64],
) -> f64 {
    let f = dot(anchor, context);
    let g = lr * (label - sigmoid(f));
    for ((s, c), a) in anchor_step.iter_mut().zip(context.iter_mut()).zip(anchor) {
        *s += g * *c;
        *c += g * a;
    }
    if label > 0.5 {
        -log_sigmoid(f)
    } else {
        -log_sigmoid(-f)
    }
}
