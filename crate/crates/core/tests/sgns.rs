mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vrwalk_core::sgns::{
    load_embeddings, save_embeddings, sgns_loss, skipgram_distribution, train, train_with,
    EmbeddingMatrix, SgnsConfig,
};
use vrwalk_core::walk::generate_corpus;
use vrwalk_core::WalkConfig;

fn random_vec(rng: &mut impl Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-scale..scale)).collect()
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let k = rng.random_range(1..=10);
        let a = random_vec(&mut rng, 8, 1.0);
        let p = random_vec(&mut rng, 8, 1.0);
        let n: Vec<Vec<f64>> = (0..k).map(|_| random_vec(&mut rng, 8, 1.0)).collect();
        let err = common::sgns_gradient_error(&a, &p, &n, 1e-5);
        assert!(err < 1e-4, "relative error {err}");
    }
}

fn toy_corpus() -> (vrwalk_core::Graph, vrwalk_core::Corpus) {
    let (g, _) = common::planted_partition(3, 15, 0.4, 0.02, 8);
    let cfg = WalkConfig {
        walks_per_node: 5,
        walk_length: 20,
        seed: 3,
        ..WalkConfig::default()
    };
    let c = generate_corpus(&g, &cfg, 1).unwrap();
    (g, c)
}

fn mean_loss(m: &EmbeddingMatrix, sample: &[(u32, u32, Vec<u32>)]) -> f64 {
    sample
        .iter()
        .map(|(t, x, negs)| {
            let n: Vec<&[f64]> = negs.iter().map(|&v| m.context(v)).collect();
            sgns_loss(m.input(*t), m.context(*x), &n)
        })
        .sum::<f64>()
        / sample.len() as f64
}

#[test]
fn loss_decreases_across_epochs() {
    let (g, corpus) = toy_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = g.node_count() as u32;
    let mut sample = Vec::new();
    for path in corpus.paths().take(60) {
        for w in path.windows(2) {
            let negs = (0..5).map(|_| rng.random_range(0..n)).collect();
            sample.push((w[0], w[1], negs));
        }
    }
    let cfg = SgnsConfig {
        dim: 16,
        window: 5,
        epochs: 3,
        ..SgnsConfig::default()
    };
    let mut losses = Vec::new();
    train_with(&corpus, g.node_count(), &cfg, |_, m| {
        losses.push(mean_loss(m, &sample))
    })
    .unwrap();
    assert_eq!(losses.len(), 3);
    assert!(losses[2] < losses[0], "{losses:?}");
}

#[test]
fn single_worker_is_bit_reproducible() {
    let (g, corpus) = toy_corpus();
    let cfg = SgnsConfig {
        dim: 8,
        window: 3,
        epochs: 2,
        seed: 17,
        ..SgnsConfig::default()
    };
    let a = train(&corpus, g.node_count(), &cfg).unwrap();
    let b = train(&corpus, g.node_count(), &cfg).unwrap();
    assert_eq!(a, b);
    let c = train(&corpus, g.node_count(), &SgnsConfig { seed: 18, ..cfg }).unwrap();
    assert_ne!(a, c);
}

#[test]
fn skipgram_softmax_is_a_distribution() {
    let (g, corpus) = toy_corpus();
    let cfg = SgnsConfig {
        dim: 8,
        window: 3,
        epochs: 1,
        ..SgnsConfig::default()
    };
    let m = train(&corpus, g.node_count(), &cfg).unwrap();
    let p = skipgram_distribution(&m, 0);
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn trained_embeddings_round_trip_through_text() {
    let (g, corpus) = toy_corpus();
    let cfg = SgnsConfig {
        dim: 8,
        window: 3,
        epochs: 1,
        ..SgnsConfig::default()
    };
    let emb = train(&corpus, g.node_count(), &cfg)
        .unwrap()
        .to_node_embeddings(&g)
        .unwrap();
    let mut buf = Vec::new();
    save_embeddings(&emb, &mut buf).unwrap();
    assert!(String::from_utf8_lossy(&buf).starts_with("45 8\n"));
    let back = load_embeddings(buf.as_slice()).unwrap();
    assert_eq!(back, emb);
}
