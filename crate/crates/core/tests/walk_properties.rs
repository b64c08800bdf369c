mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vrwalk_core::walk::{
    drrw_js_score, drrw_kl_score, generate_corpus, generate_walk, js_append_divergence,
    js_divergence, kl_append_divergence, kl_divergence, next_step_distribution,
    transition_distribution, ucb_bonus, WalkState,
};
use vrwalk_core::{Exploitation, Exploration, WalkConfig};

fn state_from(n: usize, start: u32, steps: &[u32]) -> WalkState {
    let mut s = WalkState::new(n, start);
    for &v in steps {
        s.push(v);
    }
    s
}

fn arb_state() -> impl Strategy<Value = (usize, u32, Vec<u32>)> {
    (1usize..=50).prop_flat_map(|n| {
        (
            Just(n),
            0..n as u32,
            prop::collection::vec(0..n as u32, 0..=200),
        )
    })
}

proptest! {
    #[test]
    fn occupation_sums_to_one((n, start, steps) in arb_state()) {
        let s = state_from(n, start, &steps);
        let total: f64 = s.occupation().to_dense().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn occupation_recurrence((n, start, steps) in arb_state(), x in any::<prop::sample::Index>()) {
        let mut s = state_from(n, start, &steps);
        let x = x.index(n) as u32;
        let before = s.occupation().to_dense();
        let step = s.step() as f64;
        s.push(x);
        let after = s.occupation().to_dense();
        for (i, (b, a)) in before.iter().zip(&after).enumerate() {
            let e = if i as u32 == x { 1.0 } else { 0.0 };
            let expect = ((step + n as f64) * b + e) / (step + 1.0 + n as f64);
            prop_assert!((expect - a).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_forms_match_dense((n, start, steps) in arb_state(), x in any::<prop::sample::Index>()) {
        let s = state_from(n, start, &steps);
        let x = x.index(n) as u32;
        let w = s.occupation().to_dense();
        let mut t = s.clone();
        t.push(x);
        let wx = t.occupation().to_dense();
        let kl = kl_divergence(&w, &wx);
        let js = js_divergence(&w, &wx);
        let z = s.local_time(x) as f64;
        let denom = (s.step() + n) as f64;
        prop_assert!((kl - kl_append_divergence(z, denom)).abs() < 1e-12);
        prop_assert!((js - js_append_divergence(z, denom)).abs() < 1e-12);
        prop_assert!((drrw_kl_score(&s, x) - (1.0 - kl)).abs() < 1e-12);
        prop_assert!((drrw_js_score(&s, x) - (1.0 - js)).abs() < 1e-12);
        prop_assert!(kl >= 0.0);
        prop_assert!((0.0..=std::f64::consts::LN_2).contains(&js));
    }

    #[test]
    fn softmax_is_a_shift_invariant_distribution(
        scores in prop::collection::vec(-50.0f64..50.0, 1..20),
        shift in -1e3f64..1e3,
    ) {
        let p = transition_distribution(&scores);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x > 0.0));
        let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
        let q = transition_distribution(&shifted);
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn ucb_decreases_with_candidate_visits(u_visits in 1usize..30, x_visits in 0usize..30) {
        // Node 0 is the start, node 1 the candidate, node 2 a filler.
        let mut steps = vec![0u32; u_visits];
        steps.extend(std::iter::repeat_n(1u32, x_visits));
        steps.push(2);
        let s = state_from(3, 0, &steps);
        let mut t = s.clone();
        t.push(1);
        prop_assert!(ucb_bonus(&t, 1) < ucb_bonus(&s, 1));
        let mut r = s.clone();
        r.push(0);
        prop_assert!(ucb_bonus(&r, 1) > ucb_bonus(&s, 1));
    }

    #[test]
    fn walks_follow_edges(seed in any::<u64>(), mode in 0usize..4, eps in 0.0f64..=1.0) {
        let g = common::random_connected_graph(30, 20, seed % 17);
        let exploitation = [
            Exploitation::FirstOrder,
            Exploitation::Vrrw,
            Exploitation::DrrwKl,
            Exploitation::DrrwJs,
        ][mode];
        for exploration in [Exploration::None, Exploration::EpsilonGreedy { epsilon: eps }, Exploration::Ucb] {
            let cfg = WalkConfig { exploitation, exploration, walks_per_node: 1, walk_length: 25, seed };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = generate_walk(&g, (seed % 30) as u32, &cfg, &mut rng);
            prop_assert_eq!(w.path.len(), 25);
            prop_assert!(!w.truncated);
            for pair in w.path.windows(2) {
                prop_assert!(g.has_edge(pair[0], pair[1]));
            }
        }
    }
}

#[test]
fn ucb_vanishes_while_start_unvisited() {
    let s = state_from(4, 0, &[1, 2, 1, 3]);
    for x in 0..4 {
        assert_eq!(ucb_bonus(&s, x), 0.0);
    }
}

#[test]
fn epsilon_mixture_interpolates() {
    let g = common::five_node_toy();
    let start = g.index_of("4").unwrap();
    let mut s = WalkState::new(g.node_count(), start);
    s.push(g.index_of("5").unwrap());
    s.push(start);
    let base = WalkConfig {
        exploitation: Exploitation::DrrwJs,
        exploration: Exploration::None,
        ..WalkConfig::default()
    };
    let p0 = next_step_distribution(&s, &g, &base).unwrap();
    let eps = 0.3;
    let mixed = next_step_distribution(
        &s,
        &g,
        &WalkConfig {
            exploration: Exploration::EpsilonGreedy { epsilon: eps },
            ..base
        },
    )
    .unwrap();
    let k = p0.len() as f64;
    for (a, b) in p0.iter().zip(&mixed) {
        assert!((eps / k + (1.0 - eps) * a - b).abs() < 1e-15);
    }
}

#[test]
fn corpus_lines_equal_r_times_n() {
    let g = common::random_connected_graph(60, 40, 1);
    let cfg = WalkConfig {
        walks_per_node: 3,
        walk_length: 12,
        seed: 5,
        ..WalkConfig::default()
    };
    let c = generate_corpus(&g, &cfg, 1).unwrap();
    assert_eq!(c.len(), 180);
    assert_eq!(c.token_count(), 180 * 12);
    let mut starts = vec![0usize; 60];
    for p in c.paths() {
        starts[p[0] as usize] += 1;
    }
    assert!(starts.iter().all(|&k| k == 3));
}
