mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dcmaxcut::graph::{
    brute_force_max_cut, generate_er_graph, load_graph, local_search_max_cut, save_graph,
    Assignment,
};
use dcmaxcut::merge::{CutMode, DEFAULT_PATH_BUDGET};
use dcmaxcut::partition::PartitionScheme;
use dcmaxcut::pipeline::{
    emit_csv, emit_json, emit_report, run_pipeline, Baseline, ExperimentReport, GraphSource,
    ReportFormat, RunConfig, WORKERS_ENV,
};
use dcmaxcut::qaoa::TopK;
use dcmaxcut::{Error, Result};
use serde::Serialize;

use crate::sweep::SweepGrid;

#[derive(Parser)]
#[command(
    name = "dcmaxcut",
    version,
    about = "Divide-and-conquer QAOA Max-Cut solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one graph.
    Solve(SolveArgs),
    /// Run every configuration of a JSON grid file.
    Sweep(SweepArgs),
    /// Exact or heuristic reference cut of a graph file.
    Oracle(OracleArgs),
    /// Write an Erdős–Rényi instance as an edge list.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Balanced,
    FloorStride,
}

#[derive(Clone, Copy, ValueEnum)]
enum Cut {
    Full,
    Incremental,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["graph", "er"])))]
struct SolveArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generated instance as `n,p,seed`.
    #[arg(long, value_name = "N,P,SEED")]
    er: Option<String>,
    /// Qubit cap per solver (N).
    #[arg(long, default_value_t = 20)]
    qubits: usize,
    /// Concurrent solvers (N_s); defaults to $DCMAXCUT_WORKERS or the core count.
    #[arg(long)]
    solvers: Option<usize>,
    /// Subgraph count (M); derived from --qubits when omitted.
    #[arg(long)]
    subgraphs: Option<usize>,
    /// Candidates kept per subgraph, or `all`.
    #[arg(long, default_value = "2")]
    top_k: String,
    /// Merge start level (L).
    #[arg(long, default_value_t = 1)]
    merge_level: usize,
    /// Merge worker threads; defaults to the solver count.
    #[arg(long)]
    merge_workers: Option<usize>,
    /// QAOA depth (p).
    #[arg(long, default_value_t = 3)]
    layers: usize,
    /// Optimizer evaluations per subgraph.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    /// Base seed; subgraph i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    /// auto, brute, local[=RESTARTS], value=CUT[@SECONDS] or none.
    #[arg(long, default_value = "auto")]
    baseline: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "balanced")]
    partition: Scheme,
    /// Keep raw top-K bitstrings instead of complement classes.
    #[arg(long)]
    no_fold: bool,
    /// Fix the first subgraph's class representative, halving the merge.
    #[arg(long)]
    halve_symmetry: bool,
    #[arg(long, value_enum, default_value = "full")]
    cut_mode: Cut,
    #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
    path_budget: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON grid: {"base": {...}, "n": [...], "p": [...], "graph_seeds": [...], "top_k": [...], "merge_level": [...]}
    grid: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMethod {
    Brute,
    Local,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "brute")]
    method: OracleMethod,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Oracle(args) => oracle(args),
        Command::Gen(args) => gen(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_er(spec: &str) -> Result<GraphSource> {
    let bad = || Error::InvalidParameter(format!("--er expects n,p,seed, got {spec:?}"));
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [n, p, seed] = parts.as_slice() else {
        return Err(bad());
    };
    Ok(GraphSource::Er {
        n: n.parse().map_err(|_| bad())?,
        p: p.parse().map_err(|_| bad())?,
        seed: seed.parse().map_err(|_| bad())?,
    })
}

fn parse_baseline(spec: &str) -> Result<Baseline> {
    let bad = || Error::InvalidParameter(format!("unknown baseline {spec:?}"));
    let (name, arg) = match spec.split_once('=') {
        Some((name, arg)) => (name, Some(arg)),
        None => (spec, None),
    };
    Ok(match (name, arg) {
        ("auto", None) => Baseline::Auto,
        ("brute", None) => Baseline::Brute,
        ("none", None) => Baseline::None,
        ("local", None) => Baseline::Local {
            restarts: dcmaxcut::pipeline::AUTO_LOCAL_RESTARTS,
        },
        ("local", Some(r)) => Baseline::Local {
            restarts: r.parse().map_err(|_| bad())?,
        },
        ("value", Some(v)) => {
            let (cut, seconds) = match v.split_once('@') {
                Some((c, s)) => (c, s.parse().map_err(|_| bad())?),
                None => (v, 0.0),
            };
            Baseline::Value {
                cut: cut.parse().map_err(|_| bad())?,
                seconds,
            }
        }
        _ => return Err(bad()),
    })
}

fn solve_config(args: &SolveArgs) -> Result<RunConfig> {
    let graph = match (&args.graph, &args.er) {
        (Some(path), None) => GraphSource::File { path: path.clone() },
        (None, Some(spec)) => parse_er(spec)?,
        _ => unreachable!("clap enforces exactly one source"),
    };
    Ok(RunConfig {
        graph,
        qubits: args.qubits,
        solvers: args.solvers,
        subgraphs: args.subgraphs,
        top_k: args.top_k.parse::<TopK>()?,
        merge_level: args.merge_level,
        merge_workers: args.merge_workers,
        layers: args.layers,
        budget: args.budget,
        seed: args.seed,
        alpha: args.alpha,
        baseline: parse_baseline(&args.baseline)?,
        partition: match args.partition {
            Scheme::Balanced => PartitionScheme::Balanced,
            Scheme::FloorStride => PartitionScheme::FloorStride,
        },
        fold: !args.no_fold,
        halve_symmetry: args.halve_symmetry,
        cut_mode: match args.cut_mode {
            Cut::Full => CutMode::Full,
            Cut::Incremental => CutMode::Incremental,
        },
        path_budget: args.path_budget,
        ..RunConfig::default()
    })
}

fn solve(args: SolveArgs) -> Result<u8> {
    let cfg = solve_config(&args)?;
    let (report, failure) = match run_pipeline(&cfg) {
        Ok(report) => (report, None),
        Err(f) => (*f.report, Some((f.stage, f.error))),
    };
    emit_report(&report, sink(&args.out)?, args.format.into())?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match failure {
        None => Ok(0),
        Some((stage, e)) => {
            eprintln!("error: {stage} stage failed: {e}");
            Ok(e.exit_code() as u8)
        }
    }
}

fn run_sweep(args: SweepArgs) -> Result<u8> {
    let grid: SweepGrid = serde_json::from_reader(File::open(&args.grid)?)?;
    if grid.base.solvers.is_none() {
        eprintln!("using default worker count (override with {WORKERS_ENV})");
    }
    let runs = grid.expand()?;
    let mut reports: Vec<ExperimentReport> = Vec::with_capacity(runs.len());
    let mut code = 0;
    for (i, cfg) in runs.iter().enumerate() {
        match run_pipeline(cfg) {
            Ok(r) => reports.push(r),
            Err(f) => {
                eprintln!("run {i}: {f}");
                if code == 0 {
                    code = f.error.exit_code() as u8;
                }
                reports.push(*f.report);
            }
        }
    }
    let out = sink(&args.out)?;
    match args.format {
        Format::Json => emit_json(&reports, out, true)?,
        Format::Csv => emit_csv(&reports, out)?,
    }
    Ok(code)
}

#[derive(Serialize)]
struct OracleReport {
    method: String,
    n: usize,
    edges: usize,
    value: f64,
    assignment: Assignment,
    seconds: f64,
}

fn oracle(args: OracleArgs) -> Result<u8> {
    let g = load_graph(File::open(&args.graph)?)?;
    let clock = Instant::now();
    let (method, result) = match args.method {
        OracleMethod::Brute => ("brute-force".to_string(), brute_force_max_cut(&g)?),
        OracleMethod::Local => (
            format!("local-search({})", args.restarts),
            local_search_max_cut(&g, args.restarts, args.seed)?,
        ),
    };
    let report = OracleReport {
        method,
        n: g.n(),
        edges: g.edge_count(),
        value: result.value,
        assignment: result.assignment,
        seconds: clock.elapsed().as_secs_f64(),
    };
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(0)
}

fn gen(args: GenArgs) -> Result<u8> {
    let g = generate_er_graph(args.n, args.p, args.seed)?;
    let mut out = sink(&args.out)?;
    save_graph(&g, &mut out)?;
    out.flush()?;
    Ok(0)
}
