use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::rng;
use crate::walk::sampler::{WalkConfig, Walker};

/// Walks stored back to back.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    tokens: Vec<Node>,
    offsets: Vec<usize>,
    truncated: Vec<bool>,
}

impl Corpus {
    pub fn new() -> Self {
        Corpus {
            tokens: Vec::new(),
            offsets: vec![0],
            truncated: Vec::new(),
        }
    }

    pub fn push(&mut self, path: &[Node], truncated: bool) {
        if self.offsets.is_empty() {
            self.offsets.push(0);
        }
        self.tokens.extend_from_slice(path);
        self.offsets.push(self.tokens.len());
        self.truncated.push(truncated);
    }

    pub fn len(&self) -> usize {
        self.truncated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truncated.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn path(&self, i: usize) -> &[Node] {
        &self.tokens[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn paths(&self) -> impl ExactSizeIterator<Item = &[Node]> + '_ {
        (0..self.len()).map(move |i| self.path(i))
    }

    pub fn is_truncated(&self, i: usize) -> bool {
        self.truncated[i]
    }

    pub fn truncated_count(&self) -> usize {
        self.truncated.iter().filter(|&&t| t).count()
    }

    pub fn tokens(&self) -> &[Node] {
        &self.tokens
    }

    /// One path per line, space-separated external ids.
    pub fn write<W: Write>(&self, graph: &Graph, mut out: W) -> Result<()> {
        for path in self.paths() {
            let mut first = true;
            for &v in path {
                if !first {
                    out.write_all(b" ")?;
                }
                out.write_all(graph.external_id(v).as_bytes())?;
                first = false;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads a corpus, resolving tokens against `graph`'s vocabulary.
    pub fn read<R: BufRead>(graph: &Graph, reader: R) -> Result<Self> {
        let mut corpus = Corpus::new();
        let mut path = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            path.clear();
            for token in t.split_whitespace() {
                let v = graph.index_of(token).ok_or_else(|| {
                    Error::parse(lineno + 1, format!("node `{token}` is not in the graph"))
                })?;
                path.push(v);
            }
            corpus.push(&path, false);
        }
        Ok(corpus)
    }
}

/// Runs `R` passes over all nodes, each pass visiting start nodes in a fresh
/// random order.
///
/// Every walk draws from its own stream keyed by `(seed, pass, start)`, and
/// output order is fixed by `(pass, position in the pass order)`, so the
/// corpus is identical for any number of workers.
pub fn generate_corpus(graph: &Graph, config: &WalkConfig, workers: usize) -> Result<Corpus> {
    config.validate()?;
    let n = graph.node_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;

    let mut corpus = Corpus::new();
    corpus
        .tokens
        .reserve(config.walks_per_node * n * config.walk_length);
    let mut order: Vec<Node> = (0..n as Node).collect();
    for pass in 0..config.walks_per_node {
        order.sort_unstable();
        order.shuffle(&mut rng::stream(
            config.seed,
            &[rng::TAG_SHUFFLE, pass as u64],
        ));
        let walks: Vec<(Vec<Node>, bool)> = pool.install(|| {
            order
                .par_iter()
                .map_init(
                    || Walker::new(n),
                    |walker, &start| {
                        let mut r =
                            rng::stream(config.seed, &[rng::TAG_WALK, pass as u64, start as u64]);
                        let truncated =
                            walker.walk(graph, start, config.walk_length, config, &mut r);
                        (walker.state().path().to_vec(), truncated)
                    },
                )
                .collect()
        });
        for (path, truncated) in &walks {
            corpus.push(path, *truncated);
        }
    }
    Ok(corpus)
}
