use crate::graph::Node;
use crate::walk::Corpus;

/// Number of `(anchor, context)` pairs a path of length `len` yields.
pub fn pair_count(len: usize, window: usize) -> usize {
    (0..len)
        .map(|i| i.min(window) + (len - 1 - i).min(window))
        .sum()
}

/// Calls `f(anchor, context)` for every ordered pair within `window`
/// positions of each other, anchor excluded.
#[inline]
pub fn for_each_pair(path: &[Node], window: usize, mut f: impl FnMut(Node, Node)) {
    for (i, &anchor) in path.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window).min(path.len().saturating_sub(1));
        for (j, &ctx) in path.iter().enumerate().take(hi + 1).skip(lo) {
            if j != i {
                f(anchor, ctx);
            }
        }
    }
}

/// All skip-gram pairs in the corpus; pairs never cross path boundaries.
pub fn extract_pairs(corpus: &Corpus, window: usize) -> impl Iterator<Item = (Node, Node)> + '_ {
    corpus.paths().flat_map(move |path| {
        let mut pairs = Vec::with_capacity(pair_count(path.len(), window));
        for_each_pair(path, window, |a, c| pairs.push((a, c)));
        pairs
    })
}
