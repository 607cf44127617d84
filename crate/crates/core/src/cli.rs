//! The `hetgraph` command line.
//!
//! Exit codes: 0 success, 1 undefined computation, 2 input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{self, CorrelationMethod, DatasetSummary, MetricReport, ReportRecord};
use crate::error::{Error, Result};
use crate::graph::LabelSet;
use crate::ingest::{self, Dataset, SplitSet};
use crate::metrics::{self, CcnsReduction};
use crate::report::{self, fmt_sig, NODE_METRIC_COLUMNS};
use crate::sgcn::{self, Init, TrainConfig};
use crate::synth::{self, PlantedPartitionSpec};

/// Name accepted in place of a dataset directory for the built-in 113-node example.
pub const FIG2_DATASET: &str = "@fig2";

#[derive(Debug, Parser)]
#[command(name = "hetgraph", version, about = "Homophily, CCNS and 2NCS metrics plus a simplified GCN")]
pub struct Cli {
    /// Worker threads for node-level computations.
    #[arg(long, global = true, env = "HETGRAPH_THREADS", default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Node/edge/class counts and graph-level metrics.
    Stats(StatsArgs),
    /// Node-, class- or graph-level metric tables.
    Metrics(MetricsArgs),
    /// Train or evaluate the simplified GCN.
    #[command(subcommand)]
    Sgcn(SgcnCommand),
    /// Generate synthetic datasets.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Write a seeded train/val/test split.
    Split(SplitArgs),
    /// Correlate metrics with accuracy.
    Correlate(CorrelateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file (written atomically, with a `.manifest.json` sibling). Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Dataset directory, or `@fig2`.
    dataset: String,
    /// Split file listing the nodes whose labels are visible.
    #[arg(long)]
    mask: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Node,
    Class,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricChoice {
    H,
    Ccns,
    #[value(name = "2ncs")]
    TwoNcs,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReductionChoice {
    DiagMean,
    FullMean,
    WeightedDiag,
    All,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    dataset: String,
    #[arg(long, value_enum, default_value = "graph")]
    level: Level,
    #[arg(long, value_enum, default_value = "all")]
    metric: MetricChoice,
    /// Split file listing the nodes whose labels are visible; 2NCS is then
    /// averaged over those nodes only.
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    reduction: ReductionChoice,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitChoice {
    Zeros,
    Uniform,
}

#[derive(Debug, Args)]
struct TrainFlags {
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    /// Mini-batch size; omit for full batch.
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "zeros")]
    init: InitChoice,
    /// Half-width of the uniform initializer.
    #[arg(long, default_value_t = 0.01)]
    init_scale: f64,
}

impl TrainFlags {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            learning_rate: self.lr,
            epochs: self.epochs,
            batch_size: self.batch_size,
            seed: self.seed,
            init: match self.init {
                InitChoice::Zeros => Init::Zeros,
                InitChoice::Uniform => Init::Uniform {
                    scale: self.init_scale,
                },
            },
        }
    }
}

#[derive(Debug, Subcommand)]
enum SgcnCommand {
    /// Train on a split and write per-node predictions.
    Train(SgcnTrainArgs),
    /// Train on every node but one and predict it.
    Loo(SgcnLooArgs),
}

#[derive(Debug, Args)]
struct SgcnTrainArgs {
    dataset: String,
    /// Directory with train.txt (and optionally val.txt, test.txt).
    #[arg(long)]
    split: Option<PathBuf>,
    /// Fractions for a generated split when --split is absent.
    #[arg(long, value_delimiter = ',', default_values_t = [0.6, 0.2, 0.2])]
    fractions: Vec<f64>,
    #[command(flatten)]
    train: TrainFlags,
    /// Dump the trained weights as a plain-text matrix.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SgcnLooArgs {
    dataset: String,
    #[arg(long)]
    node: usize,
    #[command(flatten)]
    train: TrainFlags,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Subcommand)]
enum SynthCommand {
    /// The 113-node counterexample.
    Fig2 {
        #[arg(long)]
        out: PathBuf,
    },
    /// Planted-partition graph.
    Pp {
        /// Comma-separated class sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        pin: f64,
        #[arg(long)]
        pout: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct SplitArgs {
    dataset: String,
    #[arg(long, value_delimiter = ',', default_values_t = [0.6, 0.2, 0.2])]
    fractions: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving train.txt, val.txt and test.txt.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    PointBiserial,
    Binned,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    /// Per-node metric CSV (as written by `metrics --level node`).
    #[arg(long, requires = "preds", conflicts_with = "table")]
    metrics: Option<PathBuf>,
    /// Per-node predictions CSV.
    #[arg(long)]
    preds: Option<PathBuf>,
    /// Metric column to correlate; all columns by default.
    #[arg(long)]
    column: Option<String>,
    #[arg(long, value_enum, default_value = "point-biserial")]
    method: MethodChoice,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    /// Graph-level table: CSV with header `dataset,h,ccns,two_ncs,<model>...`.
    #[arg(long)]
    table: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Inputs, arguments and version recorded next to every written output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub arguments: BTreeMap<String, String>,
    pub seed: Option<u64>,
    /// SHA-256 of every input file read.
    pub inputs: BTreeMap<String, String>,
}

struct Run {
    manifest: RunManifest,
}

impl Run {
    fn new(subcommand: &str) -> Self {
        Run {
            manifest: RunManifest {
                tool: "hetgraph",
                version: env!("CARGO_PKG_VERSION"),
                subcommand: subcommand.into(),
                arguments: BTreeMap::new(),
                seed: None,
                inputs: BTreeMap::new(),
            },
        }
    }

    fn arg(&mut self, key: &str, value: impl ToString) {
        self.manifest.arguments.insert(key.into(), value.to_string());
    }

    fn digest(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        self.manifest
            .inputs
            .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        Ok(())
    }

    fn load_dataset(&mut self, spec: &str) -> Result<Dataset> {
        self.arg("dataset", spec);
        if spec == FIG2_DATASET {
            return Ok(synth::build_fig2());
        }
        let dir = Path::new(spec);
        let ds = ingest::load_dataset(dir)?;
        for name in [
            ingest::EDGES_FILE,
            ingest::NODES_FILE,
            ingest::GEOM_EDGES_FILE,
            ingest::GEOM_NODES_FILE,
        ] {
            let p = dir.join(name);
            if p.is_file() {
                self.digest(&p)?;
            }
        }
        Ok(ds)
    }

    fn load_split_file(&mut self, path: &Path, n: usize) -> Result<Vec<usize>> {
        self.digest(path)?;
        ingest::load_split(path, n)
    }

    /// Writes `body` to `out` (atomically, plus manifest) or returns it for stdout.
    fn emit(&self, out: Option<&Path>, body: String) -> Result<String> {
        match out {
            Some(path) => {
                ingest::write_atomic(path, body.as_bytes())?;
                self.write_manifest(path)?;
                Ok(String::new())
            }
            None => Ok(body),
        }
    }

    fn write_manifest(&self, out: &Path) -> Result<()> {
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.json");
        let mut body = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        body.push('\n');
        ingest::write_atomic(PathBuf::from(name), body.as_bytes())
    }
}

fn dataset_name(spec: &str) -> String {
    if spec == FIG2_DATASET {
        return "fig2".into();
    }
    Path::new(spec)
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_owned())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(stdout) => {
            let mut lock = std::io::stdout().lock();
            let _ = lock.write_all(stdout.as_bytes());
            let _ = lock.flush();
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command; returns what should go to stdout.
pub fn execute(cli: Cli) -> Result<String> {
    let threads = cli.threads.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::input(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| match cli.command {
        Command::Stats(a) => cmd_stats(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Sgcn(SgcnCommand::Train(a)) => cmd_sgcn_train(a),
        Command::Sgcn(SgcnCommand::Loo(a)) => cmd_sgcn_loo(a),
        Command::Synth(c) => cmd_synth(c),
        Command::Split(a) => cmd_split(a),
        Command::Correlate(a) => cmd_correlate(a),
    })
}

fn apply_mask(run: &mut Run, ds: &Dataset, mask: Option<&Path>) -> Result<(LabelSet, Option<Vec<usize>>)> {
    match mask {
        Some(p) => {
            run.arg("mask", p.display());
            let nodes = run.load_split_file(p, ds.graph.node_count())?;
            Ok((ds.labels.clone().with_visible_nodes(&nodes)?, Some(nodes)))
        }
        None => Ok((ds.labels.clone(), None)),
    }
}

#[derive(Debug, Serialize)]
struct StatsReport {
    dataset: String,
    nodes: usize,
    edges: usize,
    raw_edge_rows: usize,
    self_loops: usize,
    asymmetric_pairs: usize,
    classes: usize,
    class_sizes: Vec<usize>,
    homophily: Option<f64>,
    ccns: BTreeMap<&'static str, f64>,
    two_ncs: Option<f64>,
    two_ncs_nodes: usize,
    two_ncs_undefined: usize,
    mask: Option<String>,
}

fn cmd_stats(a: StatsArgs) -> Result<String> {
    let mut run = Run::new("stats");
    let ds = run.load_dataset(&a.dataset)?;
    let (labels, _) = apply_mask(&mut run, &ds, a.mask.as_deref())?;
    let matrix = metrics::ccns_matrix(&ds.graph, &ds.labels)?;
    let two = metrics::two_ncs_graph(&ds.graph, &labels, None);
    let stats = StatsReport {
        dataset: dataset_name(&a.dataset),
        nodes: ds.graph.node_count(),
        edges: ds.graph.edge_count(),
        raw_edge_rows: ds.build_stats.raw_pairs,
        self_loops: ds.build_stats.self_loops,
        asymmetric_pairs: ds.build_stats.asymmetric_pairs,
        classes: ds.labels.num_classes(),
        class_sizes: ds.labels.class_sizes(),
        homophily: metrics::edge_homophily(&ds.graph, &ds.labels).ok().map(round6),
        ccns: CcnsReduction::ALL
            .into_iter()
            .map(|r| (r.name(), round6(matrix.reduce(r))))
            .collect(),
        two_ncs: two.as_ref().ok().map(|t| round6(t.value)),
        two_ncs_nodes: two.as_ref().map_or(0, |t| t.used),
        two_ncs_undefined: two.as_ref().map_or(0, |t| t.undefined),
        mask: a.mask.as_ref().map(|p| p.display().to_string()),
    };
    let format = a.output.format.unwrap_or(if a.output.out.is_some() {
        Format::Json
    } else {
        Format::Text
    });
    run.arg("format", format!("{format:?}").to_lowercase());
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&stats).expect("stats serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
            let mut s = String::from("key,value\n");
            s.push_str(&format!("dataset,{}\n", stats.dataset));
            for (k, v) in [
                ("nodes", stats.nodes),
                ("edges", stats.edges),
                ("raw_edge_rows", stats.raw_edge_rows),
                ("self_loops", stats.self_loops),
                ("asymmetric_pairs", stats.asymmetric_pairs),
                ("classes", stats.classes),
            ] {
                s.push_str(&format!("{k},{v}\n"));
            }
            s.push_str(&format!("homophily,{}\n", opt(stats.homophily)));
            for (k, v) in &stats.ccns {
                s.push_str(&format!("ccns_{k},{}\n", fmt_sig(*v)));
            }
            s.push_str(&format!("two_ncs,{}\n", opt(stats.two_ncs)));
            s
        }
        Format::Text => {
            let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_else(|| "undefined".into());
            let mut s = String::new();
            s.push_str(&format!("dataset      {}\n", stats.dataset));
            s.push_str(&format!("nodes        {}\n", stats.nodes));
            s.push_str(&format!(
                "edges        {} (raw rows {}, self-loops {}, asymmetric pairs {})\n",
                stats.edges, stats.raw_edge_rows, stats.self_loops, stats.asymmetric_pairs
            ));
            s.push_str(&format!("classes      {}\n", stats.classes));
            s.push_str(&format!("homophily    {}\n", opt(stats.homophily)));
            for (k, v) in &stats.ccns {
                s.push_str(&format!("ccns {k:<13} {}\n", fmt_sig(*v)));
            }
            s.push_str(&format!(
                "2ncs         {} ({} nodes, {} undefined)\n",
                opt(stats.two_ncs),
                stats.two_ncs_nodes,
                stats.two_ncs_undefined
            ));
            s
        }
    };
    run.emit(a.output.out.as_deref(), body)
}

fn round6(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

fn wants(choice: MetricChoice, m: MetricChoice) -> bool {
    choice == MetricChoice::All || choice == m
}

fn cmd_metrics(a: MetricsArgs) -> Result<String> {
    let mut run = Run::new("metrics");
    let ds = run.load_dataset(&a.dataset)?;
    let (labels, mask_nodes) = apply_mask(&mut run, &ds, a.mask.as_deref())?;
    run.arg("level", format!("{:?}", a.level).to_lowercase());
    run.arg("metric", format!("{:?}", a.metric).to_lowercase());
    run.arg("reduction", format!("{:?}", a.reduction).to_lowercase());
    let name = dataset_name(&a.dataset);
    let g = &ds.graph;
    let mask_note = a
        .mask
        .as_ref()
        .map(|p| format!("mask={}", p.display()))
        .unwrap_or_else(|| "mask=none".into());

    if a.level == Level::Node {
        let nm = metrics::node_metrics(g, &labels)?;
        let columns: Vec<&str> = NODE_METRIC_COLUMNS
            .iter()
            .copied()
            .zip([MetricChoice::H, MetricChoice::Ccns, MetricChoice::TwoNcs])
            .filter(|&(_, m)| wants(a.metric, m))
            .map(|(c, _)| c)
            .collect();
        let format = a.output.format.unwrap_or(Format::Csv);
        run.arg("format", format!("{format:?}").to_lowercase());
        let body = match format {
            Format::Json => {
                let mut rep = MetricReport::default();
                for u in 0..g.node_count() {
                    for &c in &columns {
                        let v = match c {
                            "local_h" => nm.local_h[u],
                            "ccns_node" => nm.ccns[u],
                            _ => nm.two_ncs[u],
                        };
                        rep.push(ReportRecord {
                            dataset: Some(format!("{name}:{u}")),
                            metric: c.into(),
                            level: "node".into(),
                            value: v,
                            method: Some(mask_note.clone()),
                            ..Default::default()
                        });
                    }
                }
                rep.to_json()
            }
            _ => report::node_metrics_csv(&nm, &columns),
        };
        return run.emit(a.output.out.as_deref(), body);
    }

    let mut rep = MetricReport::default();
    let reductions: Vec<CcnsReduction> = match a.reduction {
        ReductionChoice::All => CcnsReduction::ALL.to_vec(),
        ReductionChoice::DiagMean => vec![CcnsReduction::DiagMean],
        ReductionChoice::FullMean => vec![CcnsReduction::FullMean],
        ReductionChoice::WeightedDiag => vec![CcnsReduction::WeightedDiag],
    };
    let record = |metric: &str, level: &str, value: Option<f64>, method: String, dropped: Option<usize>| ReportRecord {
        dataset: Some(name.clone()),
        metric: metric.into(),
        level: level.into(),
        value,
        method: Some(method),
        dropped,
        ..Default::default()
    };
    match a.level {
        Level::Graph => {
            if wants(a.metric, MetricChoice::H) {
                let h = metrics::edge_homophily(g, &ds.labels)?;
                rep.push(record("h", "graph", Some(h), "edge".into(), None));
            }
            if wants(a.metric, MetricChoice::Ccns) {
                let m = metrics::ccns_matrix(g, &labels)?;
                for r in &reductions {
                    rep.push(record("ccns", "graph", Some(m.reduce(*r)), r.name().into(), Some(m.empty_classes.len())));
                }
            }
            if wants(a.metric, MetricChoice::TwoNcs) {
                let t = metrics::two_ncs_graph(g, &labels, mask_nodes.as_deref())?;
                rep.push(record("2ncs", "graph", Some(t.value), mask_note.clone(), Some(t.undefined)));
            }
        }
        Level::Class => {
            let names = &ds.class_names;
            let per_class_name = |c: usize| format!("{name}:{}", names[c]);
            if wants(a.metric, MetricChoice::H) {
                // Mean local homophily of each class.
                let nm = metrics::node_metrics(g, &ds.labels)?;
                for c in 0..labels.num_classes() {
                    let vals: Vec<f64> = (0..g.node_count())
                        .filter(|&u| ds.labels.class_of(u) == c)
                        .filter_map(|u| nm.local_h[u])
                        .collect();
                    let size = ds.labels.class_sizes()[c];
                    let v = (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64);
                    let mut r = record("h", "class", v, "mean_local".into(), Some(size - vals.len()));
                    r.dataset = Some(per_class_name(c));
                    rep.push(r);
                }
            }
            if wants(a.metric, MetricChoice::Ccns) {
                let m = metrics::ccns_matrix(g, &labels)?;
                for c in 0..labels.num_classes() {
                    let mut r = record("ccns", "class", Some(m.get(c, c)), "diagonal".into(), None);
                    r.dataset = Some(per_class_name(c));
                    rep.push(r);
                }
            }
            if wants(a.metric, MetricChoice::TwoNcs) {
                let per = metrics::two_ncs_per_class(g, &labels, mask_nodes.as_deref())?;
                for (c, v) in per.into_iter().enumerate() {
                    let mut r = record(
                        "2ncs",
                        "class",
                        v.map(|x| x.value),
                        mask_note.clone(),
                        v.map(|x| x.undefined),
                    );
                    r.dataset = Some(per_class_name(c));
                    rep.push(r);
                }
            }
        }
        Level::Node => unreachable!(),
    }
    let format = a.output.format.unwrap_or(Format::Json);
    run.arg("format", format!("{format:?}").to_lowercase());
    let body = match format {
        Format::Csv => rep.to_csv(),
        Format::Text => rep.to_text(),
        Format::Json => rep.to_json(),
    };
    run.emit(a.output.out.as_deref(), body)
}

fn record_train_flags(run: &mut Run, cfg: &TrainConfig) {
    run.arg("lr", cfg.learning_rate);
    run.arg("epochs", cfg.epochs);
    run.arg(
        "batch_size",
        cfg.batch_size.map_or_else(|| "full".to_string(), |b| b.to_string()),
    );
    run.arg("init", format!("{:?}", cfg.init));
    run.manifest.seed = Some(cfg.seed);
}

fn cmd_sgcn_train(a: SgcnTrainArgs) -> Result<String> {
    let mut run = Run::new("sgcn train");
    let ds = run.load_dataset(&a.dataset)?;
    let n = ds.graph.node_count();
    let cfg = a.train.config();
    record_train_flags(&mut run, &cfg);
    let split = match &a.split {
        Some(dir) => {
            run.arg("split", dir.display());
            for f in ["train.txt", "val.txt", "test.txt"] {
                if dir.join(f).is_file() {
                    run.digest(&dir.join(f))?;
                }
            }
            ingest::load_split_dir(dir, n)?
        }
        None => {
            let fr = three_fractions(&a.fractions)?;
            run.arg("fractions", format!("{},{},{}", fr.0, fr.1, fr.2));
            ingest::generate_splits(n, fr, cfg.seed)?
        }
    };
    let labels = ds.labels.clone().with_visible_nodes(&split.train)?;
    let val = (!split.val.is_empty()).then_some(split.val.as_slice());
    let (w, history) = sgcn::train(&ds.graph, &labels, &split.train, val, &cfg)?;
    let pred = sgcn::predict(&ds.graph, &w)?;

    if let Some(path) = &a.weights {
        ingest::write_atomic(path, w.to_text().as_bytes())?;
    }
    let eval_nodes: Vec<usize> = if split.test.is_empty() {
        (0..n).collect()
    } else {
        split.test.clone()
    };
    let body = report::predictions_csv(&ds, &pred, &eval_nodes);
    let summary = format!(
        "train_loss={} train_acc={} test_acc={}\n",
        fmt_sig(*history.loss.last().expect("epochs >= 1")),
        fmt_sig(*history.train_accuracy.last().expect("epochs >= 1")),
        fmt_sig(sgcn::accuracy(&pred, &ds.labels, &eval_nodes)?),
    );
    match &a.output.out {
        Some(p) => {
            run.emit(Some(p), body)?;
            Ok(summary)
        }
        None => Ok(body),
    }
}

fn cmd_sgcn_loo(a: SgcnLooArgs) -> Result<String> {
    let mut run = Run::new("sgcn loo");
    let ds = run.load_dataset(&a.dataset)?;
    let cfg = a.train.config();
    record_train_flags(&mut run, &cfg);
    run.arg("node", a.node);
    let out = sgcn::leave_one_out(&ds.graph, &ds.labels, a.node, &cfg)?;
    let line = format!(
        "node={} true={} predicted={} correct={}\n",
        a.node,
        ds.class_names[ds.labels.class_of(a.node)],
        ds.class_names[out.predicted],
        out.correct
    );
    match &a.output.out {
        Some(p) => {
            let body = report::predictions_csv(&ds, &vec_with(ds.graph.node_count(), a.node, out.predicted), &[a.node]);
            run.emit(Some(p), body)?;
            Ok(line)
        }
        None => Ok(line),
    }
}

fn vec_with(n: usize, u: usize, value: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    v[u] = value;
    v
}

fn cmd_synth(c: SynthCommand) -> Result<String> {
    let (mut run, ds, out) = match c {
        SynthCommand::Fig2 { out } => (Run::new("synth fig2"), synth::build_fig2(), out),
        SynthCommand::Pp {
            sizes,
            pin,
            pout,
            seed,
            out,
        } => {
            let mut run = Run::new("synth pp");
            run.arg("sizes", sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
            run.arg("pin", pin);
            run.arg("pout", pout);
            run.manifest.seed = Some(seed);
            let ds = synth::build_planted_partition(&PlantedPartitionSpec {
                sizes,
                p_in: pin,
                p_out: pout,
                seed,
            })?;
            (run, ds, out)
        }
    };
    run.arg("out", out.display());
    ingest::write_dataset(&out, &ds)?;
    run.write_manifest(&out.join(ingest::EDGES_FILE))?;
    Ok(format!(
        "wrote {} nodes, {} edges, {} classes to {}\n",
        ds.graph.node_count(),
        ds.graph.edge_count(),
        ds.labels.num_classes(),
        out.display()
    ))
}

fn cmd_split(a: SplitArgs) -> Result<String> {
    let mut run = Run::new("split");
    let ds = run.load_dataset(&a.dataset)?;
    let fr = three_fractions(&a.fractions)?;
    run.arg("fractions", format!("{},{},{}", fr.0, fr.1, fr.2));
    run.manifest.seed = Some(a.seed);
    let split: SplitSet = ingest::generate_splits(ds.graph.node_count(), fr, a.seed)?;
    ingest::write_split_dir(&a.out, &split)?;
    run.write_manifest(&a.out.join("train.txt"))?;
    Ok(format!(
        "train={} val={} test={}\n",
        split.train.len(),
        split.val.len(),
        split.test.len()
    ))
}

fn cmd_correlate(a: CorrelateArgs) -> Result<String> {
    let mut run = Run::new("correlate");
    let method = match a.method {
        MethodChoice::PointBiserial => CorrelationMethod::PointBiserial,
        MethodChoice::Binned => CorrelationMethod::Binned { bins: a.bins },
    };
    run.arg("method", method.name());
    let rep = if let Some(table) = &a.table {
        run.digest(table)?;
        analysis::graph_level_table(&read_summary_table(table)?)?
    } else {
        let (Some(mpath), Some(ppath)) = (&a.metrics, &a.preds) else {
            return Err(Error::input("correlate needs --metrics and --preds, or --table"));
        };
        run.digest(mpath)?;
        run.digest(ppath)?;
        let table = report::read_node_metrics_csv(mpath)?;
        let n = table.node_ids.iter().max().map_or(0, |m| m + 1);
        let preds = analysis::load_external_predictions(ppath, n)?;
        let columns: Vec<&String> = match &a.column {
            Some(c) => {
                run.arg("column", c);
                vec![table
                    .columns
                    .keys()
                    .find(|k| *k == c)
                    .ok_or_else(|| Error::input(format!("metrics file has no column {c:?}")))?]
            }
            None => table.columns.keys().collect(),
        };
        let mut rep = MetricReport::default();
        for col in columns {
            let values = &table.columns[col];
            let mut metric = Vec::new();
            let mut correct = Vec::new();
            for (i, &u) in table.node_ids.iter().enumerate() {
                if let Some(c) = preds[u] {
                    metric.push(values[i]);
                    correct.push(c);
                }
            }
            let res = analysis::correlate_node_metric(&metric, &correct, method)?;
            let acc = correct.iter().filter(|&&c| c).count() as f64 / correct.len() as f64;
            rep.push(ReportRecord {
                dataset: None,
                metric: col.clone(),
                level: "node".into(),
                value: None,
                model: Some(dataset_name(&ppath.display().to_string())),
                accuracy: Some(acc),
                r: Some(res.r),
                method: Some(method.name()),
                dropped: Some(res.dropped),
            });
        }
        rep
    };
    let format = a.output.format.unwrap_or(Format::Json);
    let body = match format {
        Format::Csv => rep.to_csv(),
        Format::Text => rep.to_text(),
        Format::Json => rep.to_json(),
    };
    run.emit(a.output.out.as_deref(), body)
}

fn read_summary_table(path: &Path) -> Result<Vec<DatasetSummary>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let perr = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let header: Vec<&str> = match lines.next() {
        Some((_, l)) => l.split(',').map(str::trim).collect(),
        None => return Err(perr(0, "empty table".into())),
    };
    if header.len() < 5 || header[..4] != ["dataset", "h", "ccns", "two_ncs"] {
        return Err(perr(1, "header must be dataset,h,ccns,two_ncs,<model>...".into()));
    }
    lines
        .map(|(i, l)| {
            let cols: Vec<&str> = l.split(',').map(str::trim).collect();
            if cols.len() != header.len() {
                return Err(perr(i + 1, format!("expected {} columns", header.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| perr(i + 1, format!("invalid number {s:?}")));
            Ok(DatasetSummary {
                dataset: cols[0].into(),
                homophily: num(cols[1])?,
                ccns: num(cols[2])?,
                two_ncs: num(cols[3])?,
                accuracy: header[4..]
                    .iter()
                    .zip(&cols[4..])
                    .map(|(m, v)| Ok(((*m).to_owned(), num(v)?)))
                    .collect::<Result<_>>()?,
            })
        })
        .collect()
}

fn three_fractions(f: &[f64]) -> Result<(f64, f64, f64)> {
    match *f {
        [train, val, test] => Ok((train, val, test)),
        _ => Err(Error::input(format!(
            "--fractions takes three comma-separated values, got {}",
            f.len()
        ))),
    }
}
