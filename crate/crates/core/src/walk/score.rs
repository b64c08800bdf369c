//! Exploitation and exploration scores.
//!
//! DRRW scores compare the occupation vector `w(n)` with `w^x(n)`, the vector
//! obtained by hypothetically appending candidate `x`. Only the `x` component
//! of the counts changes, and every other component is rescaled by the same
//! factor, so both divergences reduce to closed forms in `Z(n, x)`, `n` and
//! `N`. The dense length-`N` definitions are kept for verification.

use crate::graph::{Graph, Node};
use crate::walk::state::WalkState;

/// `sum_i p_i ln(p_i / q_i)` over dense vectors.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    p.iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * (pi / qi).ln())
        .sum()
}

/// Jensen-Shannon divergence in nats over dense vectors.
pub fn js_divergence(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    0.5 * kl_divergence(p, &m) + 0.5 * kl_divergence(q, &m)
}

/// `D_KL(w(n) || w^x(n))` for a candidate with local time `z` when
/// `n + N = denom`.
#[inline]
pub fn kl_append_divergence(z: f64, denom: f64) -> f64 {
    (1.0 / denom).ln_1p() - (z / denom) * (1.0 / z).ln_1p()
}

/// `JS(w(n), w^x(n))` for a candidate with local time `z` when
/// `n + N = denom`.
#[inline]
pub fn js_append_divergence(z: f64, denom: f64) -> f64 {
    let beta = 1.0 / denom;
    let alpha = 1.0 / (denom + 1.0);
    // ln(beta / gamma) and ln(alpha / gamma), gamma = (alpha + beta) / 2.
    let ln_beta_gamma = (1.0 / (2.0 * denom + 1.0)).ln_1p();
    let ln_alpha_gamma = -(1.0 / (2.0 * denom)).ln_1p();
    let others = (denom - z) * (beta * ln_beta_gamma + alpha * ln_alpha_gamma);

    let p = z * beta;
    let q = (z + 1.0) * alpha;
    let m = 0.5 * (p + q);
    let own = p * (p / m).ln() + q * (q / m).ln();
    0.5 * (others + own)
}

#[inline]
fn denom(state: &WalkState) -> f64 {
    (state.step() + state.node_count()) as f64
}

/// `Z(n, v)`.
pub fn local_time(state: &WalkState, v: Node) -> u32 {
    state.local_time(v)
}

/// `1 - D_KL(w(n) || w^x(n))`.
pub fn drrw_kl_score(state: &WalkState, x: Node) -> f64 {
    1.0 - kl_append_divergence(state.local_time(x) as f64, denom(state))
}

/// `1 - JS(w(n), w^x(n))`.
pub fn drrw_js_score(state: &WalkState, x: Node) -> f64 {
    1.0 - js_append_divergence(state.local_time(x) as f64, denom(state))
}

/// UCB1-style bonus `sqrt(ln Z(n, u) / Z(n, x))` with `u` the start node.
pub fn ucb_bonus(state: &WalkState, x: Node) -> f64 {
    let zu = state.local_time(state.start()) as f64;
    let zx = state.local_time(x) as f64;
    (zu.ln() / zx).sqrt()
}

/// Vertex-reinforced transition probabilities over the neighbors of the
/// current node, in neighbor order. `None` at a dead end.
pub fn vrrw_transition(state: &WalkState, graph: &Graph) -> Option<Vec<f64>> {
    let nbrs = graph.neighbors(state.current());
    if nbrs.is_empty() {
        return None;
    }
    let z: Vec<f64> = nbrs.iter().map(|&x| state.local_time(x) as f64).collect();
    let total: f64 = z.iter().sum();
    Some(z.into_iter().map(|v| v / total).collect())
}

/// Softmax with max-subtraction.
pub fn transition_distribution(scores: &[f64]) -> Vec<f64> {
    let mut out = scores.to_vec();
    softmax_in_place(&mut out);
    out
}

pub(crate) fn softmax_in_place(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = (*x - max).exp();
        sum += *x;
    }
    for x in v.iter_mut() {
        *x /= sum;
    }
}
