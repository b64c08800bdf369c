//! Skip-gram training with negative sampling.
//!
//! Parameters are stored as relaxed atomics so several workers can apply
//! unsynchronized (Hogwild-style) updates without data races in the Rust
//! memory model. With a single worker every update happens in a fixed order
//! and the result is bit-reproducible.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Node;
use crate::rng;
use crate::sgns::model::{sgd_term, EmbeddingMatrix};
use crate::sgns::pairs::pair_count;
use crate::walk::Corpus;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgnsConfig {
    /// Embedding dimension d.
    pub dim: usize,
    /// Context window C.
    pub window: usize,
    /// Noise samples K per observed pair.
    pub negatives: usize,
    /// Exponent applied to unigram counts for the noise distribution.
    pub noise_exponent: f64,
    pub epochs: usize,
    pub lr_start: f64,
    pub lr_end: f64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for SgnsConfig {
    fn default() -> Self {
        SgnsConfig {
            dim: 64,
            window: 10,
            negatives: 5,
            noise_exponent: 0.75,
            epochs: 5,
            lr_start: 0.025,
            lr_end: 0.0001,
            seed: 0,
            workers: 1,
        }
    }
}

impl SgnsConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.dim < 1 {
            return bad("dimension must be at least 1");
        }
        if self.window < 1 {
            return bad("window must be at least 1");
        }
        if self.negatives < 1 {
            return bad("negatives must be at least 1");
        }
        if self.epochs < 1 {
            return bad("epochs must be at least 1");
        }
        if !(self.lr_start > 0.0 && self.lr_end > 0.0) {
            return bad("learning rates must be positive");
        }
        if self.lr_end > self.lr_start {
            return bad("final learning rate exceeds the initial one");
        }
        if !self.noise_exponent.is_finite() {
            return bad("noise exponent must be finite");
        }
        Ok(())
    }
}

/// Linear decay from `start` at the first pair to `end` at the last.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearningRate {
    pub start: f64,
    pub end: f64,
    pub total: usize,
}

impl LearningRate {
    pub fn at(&self, k: usize) -> f64 {
        if self.total <= 1 {
            return self.end;
        }
        let t = (k.min(self.total - 1)) as f64 / (self.total - 1) as f64;
        self.start * (1.0 - t) + self.end * t
    }
}

struct SharedMatrix {
    dim: usize,
    cells: Vec<AtomicU64>,
}

impl SharedMatrix {
    fn from_values(dim: usize, values: &[f64]) -> Self {
        SharedMatrix {
            dim,
            cells: values.iter().map(|v| AtomicU64::new(v.to_bits())).collect(),
        }
    }

    #[inline]
    fn load(&self, row: Node, out: &mut [f64]) {
        let base = row as usize * self.dim;
        for (o, c) in out.iter_mut().zip(&self.cells[base..base + self.dim]) {
            *o = f64::from_bits(c.load(Ordering::Relaxed));
        }
    }

    #[inline]
    fn store(&self, row: Node, values: &[f64]) {
        let base = row as usize * self.dim;
        for (v, c) in values.iter().zip(&self.cells[base..base + self.dim]) {
            c.store(v.to_bits(), Ordering::Relaxed);
        }
    }

    fn to_vec(&self) -> Vec<f64> {
        self.cells
            .iter()
            .map(|c| f64::from_bits(c.load(Ordering::Relaxed)))
            .collect()
    }
}

/// Noise distribution over nodes: corpus unigram counts raised to
/// `exponent`.
pub fn noise_weights(corpus: &Corpus, node_count: usize, exponent: f64) -> Vec<f64> {
    let mut counts = vec![0u64; node_count];
    for &t in corpus.tokens() {
        counts[t as usize] += 1;
    }
    counts
        .into_iter()
        .map(|c| {
            if c == 0 {
                0.0
            } else {
                (c as f64).powf(exponent)
            }
        })
        .collect()
}

pub fn train(corpus: &Corpus, node_count: usize, config: &SgnsConfig) -> Result<EmbeddingMatrix> {
    train_with(corpus, node_count, config, |_, _| {})
}

/// Trains embeddings, calling `on_epoch(epoch, snapshot)` after every epoch.
pub fn train_with(
    corpus: &Corpus,
    node_count: usize,
    config: &SgnsConfig,
    mut on_epoch: impl FnMut(usize, &EmbeddingMatrix),
) -> Result<EmbeddingMatrix> {
    config.validate()?;
    if corpus.is_empty() || corpus.token_count() == 0 {
        return Err(Error::Invalid("corpus is empty".into()));
    }
    if let Some(&bad) = corpus.tokens().iter().find(|&&t| t as usize >= node_count) {
        return Err(Error::NodeOutOfRange {
            index: bad as usize,
            node_count,
        });
    }
    let d = config.dim;
    let noise = WeightedAliasIndex::new(noise_weights(corpus, node_count, config.noise_exponent))
        .map_err(|e| Error::Invalid(format!("noise distribution: {e}")))?;

    let mut init_rng = rng::stream(config.seed, &[rng::TAG_INIT]);
    let half = 0.5 / d as f64;
    let input: Vec<f64> = (0..node_count * d)
        .map(|_| init_rng.random_range(-half..half))
        .collect();
    let input = SharedMatrix::from_values(d, &input);
    let context = SharedMatrix::from_values(d, &vec![0.0; node_count * d]);

    let pairs_per_epoch: usize = corpus
        .paths()
        .map(|p| pair_count(p.len(), config.window))
        .sum();
    let schedule = LearningRate {
        start: config.lr_start,
        end: config.lr_end,
        total: pairs_per_epoch * config.epochs,
    };
    let processed = AtomicUsize::new(0);
    let workers = config.workers.max(1).min(corpus.len());

    for epoch in 0..config.epochs {
        if workers == 1 {
            run_worker(
                corpus,
                0..corpus.len(),
                config,
                &schedule,
                &processed,
                &noise,
                &input,
                &context,
                rng::stream(config.seed, &[rng::TAG_SGNS, epoch as u64, 0]),
            );
        } else {
            let chunk = corpus.len().div_ceil(workers);
            std::thread::scope(|scope| {
                for w in 0..workers {
                    let range = (w * chunk).min(corpus.len())..((w + 1) * chunk).min(corpus.len());
                    let (input, context, noise, processed, schedule) =
                        (&input, &context, &noise, &processed, &schedule);
                    scope.spawn(move || {
                        run_worker(
                            corpus,
                            range,
                            config,
                            schedule,
                            processed,
                            noise,
                            input,
                            context,
                            rng::stream(config.seed, &[rng::TAG_SGNS, epoch as u64, w as u64]),
                        )
                    });
                }
            });
        }
        let snapshot = EmbeddingMatrix::from_parts(d, input.to_vec(), context.to_vec())?;
        on_epoch(epoch, &snapshot);
    }
    EmbeddingMatrix::from_parts(d, input.to_vec(), context.to_vec())
}

#[allow(clippy::too_many_arguments)]
fn run_worker<R: Rng>(
    corpus: &Corpus,
    paths: std::ops::Range<usize>,
    config: &SgnsConfig,
    schedule: &LearningRate,
    processed: &AtomicUsize,
    noise: &WeightedAliasIndex<f64>,
    input: &SharedMatrix,
    context: &SharedMatrix,
    mut rng: R,
) {
    let d = config.dim;
    let mut anchor = vec![0.0; d];
    let mut step = vec![0.0; d];
    let mut ctx = vec![0.0; d];
    let window = config.window;

    for i in paths {
        let path = corpus.path(i);
        let n_pairs = pair_count(path.len(), window);
        let mut k = processed.fetch_add(n_pairs, Ordering::Relaxed);
        for (pos, &t) in path.iter().enumerate() {
            let lo = pos.saturating_sub(window);
            let hi = (pos + window).min(path.len() - 1);
            for (j, &x) in path.iter().enumerate().take(hi + 1).skip(lo) {
                if j == pos {
                    continue;
                }
                let lr = schedule.at(k);
                k += 1;
                input.load(t, &mut anchor);
                step.iter_mut().for_each(|s| *s = 0.0);

                context.load(x, &mut ctx);
                sgd_term(&anchor, &mut ctx, 1.0, lr, &mut step);
                context.store(x, &ctx);
                for _ in 0..config.negatives {
                    let neg = noise.sample(&mut rng) as Node;
                    if neg == x {
                        continue;
                    }
                    context.load(neg, &mut ctx);
                    sgd_term(&anchor, &mut ctx, 0.0, lr, &mut step);
                    context.store(neg, &ctx);
                }
                for (a, s) in anchor.iter_mut().zip(&step) {
                    *a += s;
                }
                input.store(t, &anchor);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sgns::model::{dot, sigmoid};

    #[test]
    fn schedule_endpoints() {
        let s = LearningRate {
            start: 0.025,
            end: 0.0001,
            total: 1000,
        };
        assert_eq!(s.at(0), 0.025);
        assert_eq!(s.at(999), 0.0001);
        let mut prev = f64::INFINITY;
        for k in 0..1000 {
            assert!(s.at(k) <= prev);
            prev = s.at(k);
        }
    }

    #[test]
    fn repeated_pair_saturates() {
        let mut c = Corpus::new();
        for _ in 0..10_000 {
            c.push(&[0, 1], false);
        }
        // A few unrelated tokens give the noise distribution other mass.
        c.push(&[2, 3, 4, 5], false);
        let cfg = SgnsConfig {
            dim: 8,
            window: 1,
            epochs: 1,
            seed: 3,
            ..SgnsConfig::default()
        };
        let m = train(&c, 6, &cfg).unwrap();
        let s = sigmoid(dot(m.input(0), m.context(1)));
        assert!(s > 0.9, "sigma = {s}");
        assert_eq!(m.node_count(), 6);
        assert_eq!(m.dim(), 8);
    }

    #[test]
    fn single_worker_is_reproducible() {
        let mut c = Corpus::new();
        for i in 0..50u32 {
            c.push(&[i % 7, (i + 1) % 7, (i + 3) % 7, (i + 2) % 7], false);
        }
        let cfg = SgnsConfig {
            dim: 4,
            window: 2,
            epochs: 2,
            ..SgnsConfig::default()
        };
        let a = train(&c, 7, &cfg).unwrap();
        let b = train(&c, 7, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_training_runs() {
        let mut c = Corpus::new();
        for i in 0..200u32 {
            c.push(&[i % 11, (i + 1) % 11, (i + 5) % 11], false);
        }
        let cfg = SgnsConfig {
            dim: 4,
            window: 2,
            workers: 3,
            ..SgnsConfig::default()
        };
        let m = train(&c, 11, &cfg).unwrap();
        assert!(m.input(0).iter().all(|x| x.is_finite()));
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = SgnsConfig::default();
        assert!(train(&Corpus::new(), 3, &cfg).is_err());
        let mut c = Corpus::new();
        c.push(&[0, 5], false);
        assert!(matches!(
            train(&c, 3, &cfg),
            Err(Error::NodeOutOfRange { .. })
        ));
        let bad = SgnsConfig {
            negatives: 0,
            ..cfg
        };
        c = Corpus::new();
        c.push(&[0, 1], false);
        assert!(train(&c, 3, &bad).is_err());
    }
}
