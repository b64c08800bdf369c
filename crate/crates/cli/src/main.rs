//! `vrwalk`: reinforced random-walk embeddings from the command line.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use vrwalk_core::eval::{node_classification_eval, parse_labels, LabeledNodes};
use vrwalk_core::pipeline::{embed_graph, variant_sweep, write_results_csv, ResultRow, Task};
use vrwalk_core::sgns::{self, load_embeddings, save_embeddings};
use vrwalk_core::walk::{generate_corpus, generate_walk, stuck_diagnostic, Corpus};
use vrwalk_core::{
    parse_edge_list, rng, split_edges, EdgeFeatureOp, EdgeSplit, Exploitation, Exploration, Graph,
    LogRegConfig, NodeEmbeddings, PipelineConfig, SgnsConfig, Variant, WalkConfig,
};

#[derive(Parser)]
#[command(
    name = "vrwalk",
    version,
    about = "Reinforced random-walk node embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a walk corpus, one path per line.
    Walk(WalkCmd),
    /// Train skip-gram embeddings (word2vec text format).
    Embed(EmbedCmd),
    /// Hold out edges for link prediction and write a split manifest.
    Split(SplitCmd),
    /// Link-prediction AUC per edge-feature operator.
    EvalLp(EvalLpCmd),
    /// Multi-label node classification Micro/Macro-F1.
    EvalNc(EvalNcCmd),
    /// Distinct nodes in a trailing window of one long walk.
    Diagnose(DiagnoseCmd),
    /// Run the full pipeline over a grid of walk variants.
    Sweep(SweepCmd),
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Whitespace-separated edge list.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long)]
    directed: bool,
}

#[derive(Args, Clone)]
struct WalkArgs {
    /// first-order, vrrw, drrw-kl or drrw-js.
    #[arg(long, default_value = "drrw-js")]
    exploitation: Exploitation,
    /// none, epsilon-greedy or ucb. Defaults to epsilon-greedy when
    /// --epsilon is given, otherwise ucb.
    #[arg(long)]
    exploration: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// R.
    #[arg(long, default_value_t = 80)]
    walks_per_node: usize,
    /// L, nodes per path including the start.
    #[arg(long, default_value_t = 40)]
    walk_length: usize,
}

impl WalkArgs {
    fn exploration(&self) -> Result<Exploration> {
        let name = match (&self.exploration, self.epsilon) {
            (Some(n), _) => n.as_str(),
            (None, Some(_)) => "epsilon-greedy",
            (None, None) => "ucb",
        };
        let epsilon = if name == "epsilon-greedy" {
            Some(self.epsilon.unwrap_or(0.5))
        } else {
            self.epsilon
        };
        Ok(Exploration::from_parts(name, epsilon)?)
    }

    fn config(&self, seed: u64) -> Result<WalkConfig> {
        let cfg = WalkConfig {
            exploitation: self.exploitation,
            exploration: self.exploration()?,
            walks_per_node: self.walks_per_node,
            walk_length: self.walk_length,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Clone)]
struct SgnsArgs {
    #[arg(long, default_value_t = 64)]
    dim: usize,
    /// Context window C.
    #[arg(long, default_value_t = 10)]
    window: usize,
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    lr_start: f64,
    #[arg(long, default_value_t = 0.0001)]
    lr_end: f64,
}

impl SgnsArgs {
    fn config(&self, seed: u64, workers: usize) -> SgnsConfig {
        SgnsConfig {
            dim: self.dim,
            window: self.window,
            negatives: self.negatives,
            epochs: self.epochs,
            lr_start: self.lr_start,
            lr_end: self.lr_end,
            seed,
            workers,
            ..SgnsConfig::default()
        }
    }
}

#[derive(Args, Clone)]
struct LogRegArgs {
    /// L2 penalty on the weights.
    #[arg(long, default_value_t = 1.0)]
    l2: f64,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
}

impl LogRegArgs {
    fn config(&self) -> LogRegConfig {
        LogRegConfig {
            l2: self.l2,
            tolerance: self.tolerance,
            max_iter: self.max_iter,
        }
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Threads for walks, training and per-label fits. More than one makes
    /// training nondeterministic.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct WalkCmd {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct EmbedCmd {
    #[command(flatten)]
    graph: GraphArgs,
    /// Existing corpus; generated in-process when omitted.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    sgns: SgnsArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct SplitCmd {
    #[command(flatten)]
    graph: GraphArgs,
    /// Fraction of edges to hold out.
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct EvalLpCmd {
    /// Edge list to split and embed in-process.
    #[arg(long, short, conflicts_with = "split")]
    input: Option<PathBuf>,
    /// Existing split manifest; requires --embeddings.
    #[arg(long, requires = "embeddings")]
    split: Option<PathBuf>,
    /// Embeddings trained on the split's residual graph.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    /// Comma-separated operators.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "average,hadamard,weighted-l1,weighted-l2"
    )]
    ops: Vec<EdgeFeatureOp>,
    #[arg(long)]
    dataset: Option<String>,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    sgns: SgnsArgs,
    #[command(flatten)]
    logreg: LogRegArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Results CSV; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalNcCmd {
    #[command(flatten)]
    graph: GraphArgs,
    /// Lines of `node label [label ...]`.
    #[arg(long)]
    labels: PathBuf,
    /// Precomputed embeddings; trained in-process when omitted.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    train_fraction: f64,
    #[arg(long)]
    dataset: Option<String>,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    sgns: SgnsArgs,
    #[command(flatten)]
    logreg: LogRegArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseCmd {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value = "vrrw")]
    exploitation: Exploitation,
    #[arg(long, default_value = "none")]
    exploration: String,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Start node id; drawn from the seed when omitted.
    #[arg(long)]
    start: Option<String>,
    /// Walk steps after the start node.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 100)]
    window: usize,
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    checkpoints: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    graph: GraphArgs,
    /// Node labels; selects node classification.
    #[arg(long, conflicts_with = "fraction")]
    labels: Option<PathBuf>,
    /// Held-out edge fraction; selects link prediction.
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    train_fraction: f64,
    #[arg(long, value_delimiter = ',', default_value = "weighted-l2")]
    ops: Vec<EdgeFeatureOp>,
    #[arg(long, value_delimiter = ',', default_value = "vrrw,drrw-kl,drrw-js")]
    exploitations: Vec<Exploitation>,
    #[arg(long, value_delimiter = ',', default_value = "none,epsilon-greedy,ucb")]
    explorations: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    epsilons: Vec<f64>,
    #[arg(long, default_value_t = 80)]
    walks_per_node: usize,
    #[arg(long, default_value_t = 40)]
    walk_length: usize,
    #[arg(long)]
    dataset: Option<String>,
    #[command(flatten)]
    sgns: SgnsArgs,
    #[command(flatten)]
    logreg: LogRegArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Sidecar written next to every output file.
#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    command: &'a str,
    argv: Vec<String>,
    version: &'a str,
    seed: u64,
    config: C,
    elapsed_secs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncated_walks: Option<usize>,
    output: String,
    sha256: String,
}

fn write_manifest<C: Serialize>(
    command: &str,
    output: &Path,
    seed: u64,
    config: C,
    started: Instant,
    truncated_walks: Option<usize>,
) -> Result<()> {
    let manifest = Manifest {
        command,
        argv: std::env::args().collect(),
        version: env!("CARGO_PKG_VERSION"),
        seed,
        config,
        elapsed_secs: started.elapsed().as_secs_f64(),
        truncated_walks,
        output: output.display().to_string(),
        sha256: sha256_file(output)?,
    };
    let path = manifest_path(output);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &manifest)?;
    Ok(())
}

fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn sha256_file(path: &Path) -> Result<String> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

fn read_graph(args: &GraphArgs) -> Result<Graph> {
    let file =
        File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    parse_edge_list(BufReader::new(file), args.directed)
        .with_context(|| format!("reading edge list {}", args.input.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn dataset_name(explicit: &Option<String>, path: &Path) -> String {
    explicit.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into())
    })
}

/// Writes results to `output` (plus a manifest) or to stdout.
fn emit_results<C: Serialize>(
    command: &str,
    rows: &[ResultRow],
    output: &Option<PathBuf>,
    seed: u64,
    config: C,
    started: Instant,
) -> Result<()> {
    match output {
        Some(path) => {
            write_results_csv(rows, create(path)?)?;
            write_manifest(command, path, seed, config, started, None)
        }
        None => Ok(write_results_csv(rows, io::stdout().lock())?),
    }
}

fn cmd_walk(c: WalkCmd) -> Result<()> {
    let started = Instant::now();
    let graph = read_graph(&c.graph)?;
    let cfg = c.walk.config(c.run.seed)?;
    let corpus = generate_corpus(&graph, &cfg, c.run.workers)?;
    let mut out = create(&c.output)?;
    corpus.write(&graph, &mut out)?;
    out.flush()?;
    drop(out);
    write_manifest(
        "walk",
        &c.output,
        c.run.seed,
        cfg,
        started,
        Some(corpus.truncated_count()),
    )
}

fn cmd_embed(c: EmbedCmd) -> Result<()> {
    let started = Instant::now();
    let graph = read_graph(&c.graph)?;
    let walk = c.walk.config(c.run.seed)?;
    let sgns_cfg = c.sgns.config(c.run.seed, c.run.workers);
    let corpus = match &c.corpus {
        Some(path) => Corpus::read(&graph, open(path)?)
            .with_context(|| format!("reading corpus {}", path.display()))?,
        None => generate_corpus(&graph, &walk, c.run.workers)?,
    };
    let embeddings =
        sgns::train(&corpus, graph.node_count(), &sgns_cfg)?.to_node_embeddings(&graph)?;
    let mut out = create(&c.output)?;
    save_embeddings(&embeddings, &mut out)?;
    out.flush()?;
    drop(out);
    #[derive(Serialize)]
    struct Config {
        walk: Option<WalkConfig>,
        corpus: Option<String>,
        sgns: SgnsConfig,
    }
    let config = Config {
        walk: c.corpus.is_none().then_some(walk),
        corpus: c.corpus.as_ref().map(|p| p.display().to_string()),
        sgns: sgns_cfg,
    };
    write_manifest(
        "embed",
        &c.output,
        c.run.seed,
        config,
        started,
        Some(corpus.truncated_count()),
    )
}

fn cmd_split(c: SplitCmd) -> Result<()> {
    let started = Instant::now();
    let graph = read_graph(&c.graph)?;
    let split = split_edges(&graph, c.fraction, c.seed)?;
    if split.is_partial() {
        eprintln!(
            "warning: removed fraction {:.4} is below the requested {}",
            split.achieved_fraction, c.fraction
        );
    }
    let mut out = create(&c.output)?;
    split.write_manifest(&mut out)?;
    out.flush()?;
    drop(out);
    #[derive(Serialize)]
    struct Config {
        fraction: f64,
        achieved_fraction: f64,
        held_out: usize,
    }
    let config = Config {
        fraction: c.fraction,
        achieved_fraction: split.achieved_fraction,
        held_out: split.test_positive.len(),
    };
    write_manifest("split", &c.output, c.seed, config, started, None)
}

fn pipeline_config(
    walk: &WalkArgs,
    sgns: &SgnsArgs,
    logreg: &LogRegArgs,
    run: &RunArgs,
) -> Result<PipelineConfig> {
    Ok(PipelineConfig {
        walk: walk.config(run.seed)?,
        sgns: sgns.config(run.seed, run.workers),
        logreg: logreg.config(),
        seed: run.seed,
        workers: run.workers,
    })
}

fn cmd_eval_lp(c: EvalLpCmd) -> Result<()> {
    let started = Instant::now();
    let cfg = pipeline_config(&c.walk, &c.sgns, &c.logreg, &c.run)?;
    let (split, embeddings, name): (EdgeSplit, NodeEmbeddings, String) = match (&c.input, &c.split)
    {
        (Some(input), None) => {
            if c.embeddings.is_some() {
                bail!("--embeddings needs the matching --split manifest");
            }
            let graph = read_graph(&GraphArgs {
                input: input.clone(),
                directed: false,
            })?;
            let split = split_edges(&graph, c.fraction, c.run.seed)?;
            let (emb, _) = embed_graph(&split.residual, &cfg)?;
            (split, emb, dataset_name(&c.dataset, input))
        }
        (None, Some(path)) => {
            let split = EdgeSplit::read_manifest(open(path)?)
                .with_context(|| format!("reading split {}", path.display()))?;
            let emb_path = c.embeddings.as_ref().expect("clap enforces --embeddings");
            let emb = load_embeddings(open(emb_path)?)
                .with_context(|| format!("reading embeddings {}", emb_path.display()))?;
            (split, emb, dataset_name(&c.dataset, path))
        }
        _ => bail!("give either --input or --split with --embeddings"),
    };
    let scores = vrwalk_core::eval::link_prediction_eval(
        &embeddings,
        &split,
        &c.ops,
        c.run.seed,
        &cfg.logreg,
    )?;
    let rows: Vec<ResultRow> = scores
        .iter()
        .map(|s| ResultRow {
            dataset: name.clone(),
            exploitation: cfg.walk.exploitation,
            exploration: cfg.walk.exploration,
            target: s.op.name().to_owned(),
            metric: "auc",
            value: s.auc,
            seed: c.run.seed,
        })
        .collect();
    emit_results("eval-lp", &rows, &c.output, c.run.seed, cfg, started)
}

fn cmd_eval_nc(c: EvalNcCmd) -> Result<()> {
    let started = Instant::now();
    let graph = read_graph(&c.graph)?;
    let labels: LabeledNodes = parse_labels(open(&c.labels)?, &graph)
        .with_context(|| format!("reading labels {}", c.labels.display()))?;
    let cfg = pipeline_config(&c.walk, &c.sgns, &c.logreg, &c.run)?;
    let embeddings = match &c.embeddings {
        Some(path) => load_embeddings(open(path)?)?,
        None => embed_graph(&graph, &cfg)?.0,
    };
    let report = node_classification_eval(
        &embeddings,
        &graph,
        &labels,
        c.train_fraction,
        c.run.seed,
        &cfg.logreg,
        c.run.workers,
    )?;
    if !report.unpredictable_labels.is_empty() {
        eprintln!(
            "warning: {} label(s) have no training examples and are never predicted",
            report.unpredictable_labels.len()
        );
    }
    let name = dataset_name(&c.dataset, &c.graph.input);
    let target = format!("train={}", c.train_fraction);
    let row = |metric, value| ResultRow {
        dataset: name.clone(),
        exploitation: cfg.walk.exploitation,
        exploration: cfg.walk.exploration,
        target: target.clone(),
        metric,
        value,
        seed: c.run.seed,
    };
    let rows = [
        row("micro-f1", report.scores.micro),
        row("macro-f1", report.scores.macro_),
    ];
    emit_results("eval-nc", &rows, &c.output, c.run.seed, cfg, started)
}

fn cmd_diagnose(c: DiagnoseCmd) -> Result<()> {
    let started = Instant::now();
    let graph = read_graph(&c.graph)?;
    let cfg = WalkConfig {
        exploitation: c.exploitation,
        exploration: Exploration::from_parts(&c.exploration, c.epsilon)?,
        walks_per_node: 1,
        walk_length: c.steps + 1,
        seed: c.seed,
    };
    cfg.validate()?;
    let mut rng = rng::stream(c.seed, &[rng::TAG_WALK]);
    let start = match &c.start {
        Some(id) => graph
            .index_of(id)
            .with_context(|| format!("start node `{id}` is not in the graph"))?,
        None => rand::Rng::random_range(&mut rng, 0..graph.node_count() as u32),
    };
    let walk = generate_walk(&graph, start, &cfg, &mut rng);
    if walk.truncated {
        eprintln!(
            "warning: walk hit a dead end after {} steps",
            walk.path.len() - 1
        );
    }
    let diag = stuck_diagnostic(&walk.path, c.window, &c.checkpoints);
    for s in &diag.skipped {
        eprintln!("warning: checkpoint {s} skipped (walk too short or window too wide)");
    }
    match &c.output {
        Some(path) => {
            let mut out = create(path)?;
            diag.write_csv(&graph, &mut out)?;
            out.flush()?;
            drop(out);
            #[derive(Serialize)]
            struct Config {
                walk: WalkConfig,
                start: String,
                window: usize,
                checkpoints: Vec<usize>,
            }
            let config = Config {
                walk: cfg,
                start: graph.external_id(start).to_owned(),
                window: c.window,
                checkpoints: c.checkpoints.clone(),
            };
            write_manifest(
                "diagnose",
                path,
                c.seed,
                config,
                started,
                Some(usize::from(walk.truncated)),
            )
        }
        None => Ok(diag.write_csv(&graph, io::stdout().lock())?),
    }
}

fn cmd_sweep(c: SweepCmd) -> Result<()> {
    let started = Instant::now();
    let graph = read_graph(&c.graph)?;
    let explorations: Vec<&str> = c.explorations.iter().map(String::as_str).collect();
    let grid = Variant::grid(&c.exploitations, &explorations, &c.epsilons)?;
    let base = PipelineConfig {
        walk: WalkConfig {
            walks_per_node: c.walks_per_node,
            walk_length: c.walk_length,
            seed: c.run.seed,
            ..WalkConfig::default()
        },
        sgns: c.sgns.config(c.run.seed, c.run.workers),
        logreg: c.logreg.config(),
        seed: c.run.seed,
        workers: c.run.workers,
    };
    base.walk.validate()?;
    let name = dataset_name(&c.dataset, &c.graph.input);
    let rows = match (&c.labels, c.fraction) {
        (Some(path), _) => {
            let labels = parse_labels(open(path)?, &graph)?;
            let task = Task::NodeClassification {
                graph: &graph,
                labels: &labels,
                train_fraction: c.train_fraction,
                with_macro: false,
            };
            variant_sweep(&name, task, &grid, &base)?
        }
        (None, Some(fraction)) => {
            let split = split_edges(&graph, fraction, c.run.seed)?;
            variant_sweep(
                &name,
                Task::LinkPrediction {
                    split: &split,
                    ops: &c.ops,
                },
                &grid,
                &base,
            )?
        }
        (None, None) => {
            bail!("give --labels for node classification or --fraction for link prediction")
        }
    };
    #[derive(Serialize)]
    struct Config {
        base: PipelineConfig,
        grid: Vec<Variant>,
    }
    emit_results(
        "sweep",
        &rows,
        &c.output,
        c.run.seed,
        Config { base, grid },
        started,
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Walk(c) => cmd_walk(c),
        Command::Embed(c) => cmd_embed(c),
        Command::Split(c) => cmd_split(c),
        Command::EvalLp(c) => cmd_eval_lp(c),
        Command::EvalNc(c) => cmd_eval_nc(c),
        Command::Diagnose(c) => cmd_diagnose(c),
        Command::Sweep(c) => cmd_sweep(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
