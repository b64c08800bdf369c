use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn vrwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vrwalk"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = vrwalk(args);
    assert!(
        out.status.success(),
        "vrwalk {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn manifest(output: &Path) -> serde_json::Value {
    let text = fs::read_to_string(format!("{}.manifest.json", output.display())).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Four 6-cliques chained by bridges, with community labels.
fn clique_fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let mut edges = String::new();
    let mut labels = String::new();
    for c in 0..4 {
        for u in 0..6 {
            labels.push_str(&format!("n{} c{c}\n", c * 6 + u));
            for v in u + 1..6 {
                edges.push_str(&format!("n{} n{}\n", c * 6 + u, c * 6 + v));
            }
        }
        if c < 3 {
            edges.push_str(&format!("n{} n{}\n", c * 6 + 5, c * 6 + 6));
        }
    }
    (
        write(dir, "cliques.txt", &edges),
        write(dir, "cliques.labels", &labels),
    )
}

#[test]
fn triangle_corpus_has_one_line_per_walk() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "tri.txt", "a b\nb c\nc a\n");
    let out = dir.path().join("walks.txt");
    ok(&[
        "walk",
        "-i",
        s(&g),
        "-o",
        s(&out),
        "--walks-per-node",
        "1",
        "--walk-length",
        "3",
    ]);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.split(' ').count() == 3));
    let m = manifest(&out);
    assert_eq!(m["seed"], 0);
    assert_eq!(m["truncated_walks"], 0);
    assert_eq!(m["config"]["walk_length"], 3);
    assert_eq!(m["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn same_seed_gives_same_checksum() {
    let dir = TempDir::new().unwrap();
    let (g, _) = clique_fixture(dir.path());
    let run = |seed: &str, name: &str| {
        let out = dir.path().join(name);
        ok(&[
            "walk",
            "-i",
            s(&g),
            "-o",
            s(&out),
            "--walks-per-node",
            "3",
            "--seed",
            seed,
        ]);
        manifest(&out)["sha256"].as_str().unwrap().to_owned()
    };
    assert_eq!(run("5", "a.txt"), run("5", "b.txt"));
    assert_ne!(run("5", "a.txt"), run("6", "c.txt"));
}

#[test]
fn embed_writes_loadable_word2vec_text() {
    let dir = TempDir::new().unwrap();
    let (g, _) = clique_fixture(dir.path());
    let corpus = dir.path().join("walks.txt");
    ok(&[
        "walk",
        "-i",
        s(&g),
        "-o",
        s(&corpus),
        "--walks-per-node",
        "4",
        "--walk-length",
        "10",
    ]);
    let emb = dir.path().join("emb.txt");
    ok(&[
        "embed",
        "-i",
        s(&g),
        "--corpus",
        s(&corpus),
        "--dim",
        "8",
        "--window",
        "3",
        "-o",
        s(&emb),
    ]);
    let text = fs::read_to_string(&emb).unwrap();
    assert_eq!(text.lines().next().unwrap(), "24 8");
    let loaded = vrwalk_core::sgns::load_embeddings(text.as_bytes()).unwrap();
    assert_eq!(loaded.len(), 24);
    assert!(loaded.get("n0").is_some());

    let again = dir.path().join("emb2.txt");
    ok(&[
        "embed",
        "-i",
        s(&g),
        "--corpus",
        s(&corpus),
        "--dim",
        "8",
        "--window",
        "3",
        "-o",
        s(&again),
    ]);
    assert_eq!(manifest(&emb)["sha256"], manifest(&again)["sha256"]);
}

#[test]
fn missing_corpus_fails_with_a_message() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "tri.txt", "a b\nb c\nc a\n");
    let missing = dir.path().join("nope.txt");
    let out = vrwalk(&[
        "embed",
        "-i",
        s(&g),
        "--corpus",
        s(&missing),
        "-o",
        s(&dir.path().join("e.txt")),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.txt"));
}

#[test]
fn bad_walk_configs_are_rejected() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "tri.txt", "a b\nb c\nc a\n");
    let o = dir.path().join("w.txt");
    for extra in [
        &["--walk-length", "1"][..],
        &["--exploration", "ucb", "--epsilon", "0.3"],
        &["--epsilon", "1.5"],
        &["--exploitation", "bogus"],
    ] {
        let mut args = vec!["walk", "-i", s(&g), "-o", s(&o)];
        args.extend_from_slice(extra);
        assert!(!vrwalk(&args).status.success(), "{extra:?} accepted");
    }
}

#[test]
fn separable_embeddings_score_perfect_auc() {
    let dir = TempDir::new().unwrap();
    let (g, _) = clique_fixture(dir.path());
    let split = dir.path().join("split.txt");
    ok(&[
        "split",
        "-i",
        s(&g),
        "--fraction",
        "0.4",
        "--seed",
        "2",
        "-o",
        s(&split),
    ]);
    let mut emb = String::from("24 4\n");
    for v in 0..24 {
        let mut row = ["0"; 4];
        row[v / 6] = "1";
        emb.push_str(&format!("n{v} {}\n", row.join(" ")));
    }
    let emb = write(dir.path(), "emb.txt", &emb);
    let csv = ok(&[
        "eval-lp",
        "--split",
        s(&split),
        "--embeddings",
        s(&emb),
        "--ops",
        "weighted-l2",
    ]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "dataset,exploitation,exploration,epsilon,operator_or_split,metric,value,seed"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[4], "weighted-l2");
    assert_eq!(row[5], "auc");
    assert_eq!(row[6], "100.0");
}

#[test]
fn epsilon_grid_of_two_gives_two_rows() {
    let dir = TempDir::new().unwrap();
    let (g, labels) = clique_fixture(dir.path());
    let out = dir.path().join("sweep.csv");
    ok(&[
        "sweep",
        "-i",
        s(&g),
        "--labels",
        s(&labels),
        "--exploitations",
        "drrw-js",
        "--explorations",
        "epsilon-greedy",
        "--epsilons",
        "0,1",
        "--walks-per-node",
        "4",
        "--walk-length",
        "10",
        "--dim",
        "8",
        "--epochs",
        "1",
        "-o",
        s(&out),
    ]);
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("cliques,drrw-js,epsilon-greedy,0,"));
    assert!(rows[1].starts_with("cliques,drrw-js,epsilon-greedy,1,"));
    assert_eq!(
        manifest(&out)["config"]["grid"].as_array().unwrap().len(),
        2
    );
}

#[test]
fn node_classification_reports_both_f1_scores() {
    let dir = TempDir::new().unwrap();
    let (g, labels) = clique_fixture(dir.path());
    let csv = ok(&[
        "eval-nc",
        "-i",
        s(&g),
        "--labels",
        s(&labels),
        "--walks-per-node",
        "10",
        "--walk-length",
        "10",
        "--dim",
        "8",
        "--window",
        "3",
    ]);
    let metrics: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap())
        .collect();
    assert_eq!(metrics, ["micro-f1", "macro-f1"]);
}

#[test]
fn diagnose_reports_each_checkpoint() {
    let dir = TempDir::new().unwrap();
    let (g, _) = clique_fixture(dir.path());
    let out = dir.path().join("diag.csv");
    ok(&[
        "diagnose",
        "-i",
        s(&g),
        "--steps",
        "1000",
        "--checkpoints",
        "100,1000",
        "--start",
        "n0",
        "-o",
        s(&out),
    ]);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "checkpoint_step,distinct_nodes,frequencies"
    );
    let steps: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(steps, ["100", "1000"]);
    assert_eq!(manifest(&out)["config"]["start"], "n0");
}

#[test]
fn in_process_link_prediction_runs() {
    let dir = TempDir::new().unwrap();
    let (g, _) = clique_fixture(dir.path());
    let csv = ok(&[
        "eval-lp",
        "-i",
        s(&g),
        "--fraction",
        "0.3",
        "--walks-per-node",
        "5",
        "--walk-length",
        "10",
        "--dim",
        "8",
        "--epochs",
        "1",
    ]);
    assert_eq!(csv.lines().count(), 5);
}
