//! End-to-end driver: partition, scheduled QAOA solves, merge, scoring.

mod config;
mod report;

pub use config::{
    available_parallelism, default_workers, AlgTime, Baseline, GraphSource, RunConfig,
    AUTO_LOCAL_RESTARTS, WORKERS_ENV,
};
pub use report::{
    emit_csv, emit_json, emit_report, BaselineSummary, CandidateSummary, CsvRow, Environment,
    ExperimentReport, GraphSummary, ReportFormat, RunStatus, ScheduleSummary, Stage,
    SubgraphSummary, Timings, CSV_HEADER, SCHEMA_VERSION,
};

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;
use std::time::Instant;

use crate::bitstring;
use crate::error::{Error, Result};
use crate::graph::{brute_force_max_cut, local_search_max_cut, Graph, BRUTE_FORCE_CAP};
use crate::merge::{build_candidate_pools, level_aware_merge, MergeOptions};
use crate::metrics::{pei, PeiInputs};
use crate::partition::{min_subgraphs_for_cap, partition, PartitionResult, SubgraphSpec};
use crate::qaoa::{solve_subgraph, SolveOptions, SubgraphSolution, TopK};

/// Subgraph indices grouped into rounds of at most `slots` concurrent solves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub slots: usize,
    pub rounds: Vec<Vec<usize>>,
}

/// Consecutive index blocks of `slots` subgraphs, largest first within a
/// round (stable, so equal sizes keep index order).
pub fn schedule_rounds(specs: &[SubgraphSpec], slots: usize) -> Result<Schedule> {
    if slots == 0 {
        return Err(Error::InvalidParameter(
            "need at least one solver slot".into(),
        ));
    }
    let indices: Vec<usize> = (0..specs.len()).collect();
    let rounds = indices
        .chunks(slots)
        .map(|chunk| {
            let mut round = chunk.to_vec();
            round.sort_by_key(|&i| std::cmp::Reverse(specs[i].size()));
            round
        })
        .collect();
    Ok(Schedule { slots, rounds })
}

/// Smallest accepted `M` at or above the qubit-cap bound.
pub fn derive_subgraph_count(g: &Graph, cfg: &RunConfig) -> Result<usize> {
    let n = g.n();
    let lower = min_subgraphs_for_cap(n, cfg.qubits);
    if lower == usize::MAX {
        return Err(Error::InvalidParameter(format!(
            "qubit cap {} cannot chain {n} vertices",
            cfg.qubits
        )));
    }
    let mut m = lower;
    loop {
        match partition(g, m, cfg.partition, None) {
            Ok(_) => return Ok(m),
            Err(Error::InvalidParameter(_)) if m + 1 < n => m += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Failure of one stage, with everything completed before it.
#[derive(Debug)]
pub struct PipelineFailure {
    pub stage: Stage,
    pub error: Error,
    pub report: Box<ExperimentReport>,
}

impl std::fmt::Display for PipelineFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} stage failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for PipelineFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

struct Run {
    report: ExperimentReport,
}

impl Run {
    fn fail(mut self, stage: Stage, error: Error) -> PipelineFailure {
        self.report.status = RunStatus::Failed {
            stage,
            message: error.to_string(),
        };
        PipelineFailure {
            stage,
            error,
            report: Box::new(self.report),
        }
    }
}

macro_rules! stage {
    ($run:ident, $stage:expr, $body:expr) => {
        match $body {
            Ok(v) => v,
            Err(e) => return Err($run.fail($stage, e)),
        }
    };
}

/// Runs every stage in order. The report is deterministic for a fixed
/// configuration apart from `timings` and `environment`.
pub fn run_pipeline(cfg: &RunConfig) -> std::result::Result<ExperimentReport, PipelineFailure> {
    let cfg = cfg.resolved();
    let mut run = Run {
        report: ExperimentReport::new(cfg.clone()),
    };
    stage!(run, Stage::Config, cfg.validate());
    let solvers = cfg.solvers.expect("resolved");
    let merge_workers = cfg.merge_workers.expect("resolved");

    let clock = Instant::now();
    let g = stage!(run, Stage::Graph, load_nonempty(&cfg.graph));
    run.report.timings.graph_seconds = clock.elapsed().as_secs_f64();
    run.report.graph = Some(GraphSummary {
        n: g.n(),
        edges: g.edge_count(),
        total_weight: g.total_weight(),
    });

    let clock = Instant::now();
    let m = match cfg.subgraphs {
        Some(m) => m,
        None => stage!(run, Stage::Partition, derive_subgraph_count(&g, &cfg)),
    };
    let parts = stage!(
        run,
        Stage::Partition,
        partition(&g, m, cfg.partition, Some(cfg.qubits))
    );
    let partition_seconds = clock.elapsed().as_secs_f64();
    run.report.timings.partition_seconds = partition_seconds;
    run.report.subgraph_count = Some(parts.len());
    run.report.inter_edges = Some(parts.inter_edges.len());
    run.report
        .warnings
        .extend(merge_hints(&cfg, parts.len(), merge_workers));
    stage!(run, Stage::Merge, check_path_budget(&cfg, &parts));

    let schedule = stage!(run, Stage::Qaoa, schedule_rounds(&parts.subgraphs, solvers));
    run.report.schedule = Some(ScheduleSummary {
        slots: schedule.slots,
        rounds: schedule.rounds.len(),
        plan: schedule.rounds.clone(),
    });
    let clock = Instant::now();
    let executed = execute_schedule(&parts, &schedule, &cfg);
    let qaoa_seconds = clock.elapsed().as_secs_f64();
    run.report.timings.qaoa_seconds = qaoa_seconds;
    run.report.timings.max_concurrent_solves = executed.max_concurrent;
    let mut solutions = Vec::with_capacity(parts.len());
    let mut first_error = None;
    for (i, outcome) in executed.outcomes.into_iter().enumerate() {
        match outcome {
            Ok(sol) => {
                run.report.subgraphs.push(summarize(
                    i,
                    &parts.subgraphs[i],
                    subgraph_seed(&cfg, i),
                    &sol,
                ));
                solutions.push(sol);
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    if let Some(e) = first_error {
        return Err(run.fail(Stage::Qaoa, e));
    }

    let clock = Instant::now();
    let sets: Vec<_> = solutions.into_iter().map(|s| s.candidates).collect();
    let pool = stage!(run, Stage::Merge, build_candidate_pools(&sets));
    let merge_opts = MergeOptions {
        start_level: cfg.merge_level,
        workers: merge_workers,
        cut_mode: cfg.cut_mode,
        halve_symmetry: cfg.halve_symmetry,
        path_budget: cfg.path_budget,
    };
    let merged = stage!(
        run,
        Stage::Merge,
        level_aware_merge(&pool, &g, &parts, &merge_opts)
    );
    let merge_seconds = clock.elapsed().as_secs_f64();
    run.report.timings.merge_seconds = merge_seconds;
    let best_value = merged.best_value;
    run.report.merge = Some(merged);
    run.report.timings.alg_seconds = match cfg.alg_time {
        AlgTime::PartitionQaoaMerge => partition_seconds + qaoa_seconds + merge_seconds,
        AlgTime::QaoaMerge => qaoa_seconds + merge_seconds,
    };

    let baseline = stage!(run, Stage::Baseline, run_baseline(&g, &cfg));
    run.report.timings.baseline_seconds = baseline.as_ref().map_or(0.0, |b| b.seconds);
    run.report.baseline = baseline.clone();

    if let Some(base) = baseline {
        if base.cut > 0.0 {
            let inputs = PeiInputs {
                cut_alg: best_value,
                cut_opt: base.cut,
                t_alg: run.report.timings.alg_seconds,
                t_base: base.seconds,
                alpha: cfg.alpha,
            };
            let scored = stage!(run, Stage::Metrics, pei(inputs));
            run.report.ar_exceeds_one = scored.ar > 1.0;
            run.report.metrics = Some(scored);
        } else {
            run.report
                .warnings
                .push("reference cut is zero; metrics skipped".into());
        }
    }
    Ok(run.report)
}

fn load_nonempty(source: &GraphSource) -> Result<Graph> {
    let g = source.load()?;
    if g.n() == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    Ok(g)
}

fn subgraph_seed(cfg: &RunConfig, index: usize) -> u64 {
    cfg.seed.wrapping_add(index as u64)
}

fn merge_hints(cfg: &RunConfig, m: usize, workers: usize) -> Vec<String> {
    let mut hints = Vec::new();
    if let TopK::Count(k) = cfg.top_k {
        let level = cfg.merge_level.min(m) as i32;
        let starting = 2.0 * (k as f64).powi(level);
        if starting < workers as f64 / 2.0 || starting > 4.0 * workers as f64 {
            hints.push(format!(
                "2K^L = {starting} starting paths for {workers} merge workers; \
                 values close to the worker count balance best"
            ));
        }
    }
    hints
}

/// Rejects a run whose merge is certain to exceed the path budget before
/// any solver time is spent. Only fixed K has a size known in advance.
fn check_path_budget(cfg: &RunConfig, parts: &PartitionResult) -> Result<()> {
    let TopK::Count(k) = cfg.top_k else {
        return Ok(());
    };
    let classes = k as f64;
    let mut paths = if cfg.halve_symmetry { 1.0 } else { 2.0 };
    for _ in 0..parts.len() {
        paths *= classes;
    }
    if paths > cfg.path_budget as f64 {
        return Err(Error::PathBudgetExceeded {
            paths,
            budget: cfg.path_budget,
        });
    }
    Ok(())
}

struct Executed {
    outcomes: Vec<Result<SubgraphSolution>>,
    max_concurrent: usize,
}

/// Runs the rounds in order; each round's solves run concurrently and the
/// next round starts only after all of them finish.
fn execute_schedule(parts: &PartitionResult, schedule: &Schedule, cfg: &RunConfig) -> Executed {
    let active = AtomicUsize::new(0);
    let peak = AtomicUsize::new(0);
    let mut outcomes: Vec<Option<Result<SubgraphSolution>>> =
        (0..parts.len()).map(|_| None).collect();

    let solve = |i: usize| {
        let now = active.fetch_add(1, Ordering::SeqCst) + 1;
        peak.fetch_max(now, Ordering::SeqCst);
        let opts = SolveOptions {
            top_k: cfg.top_k,
            layers: cfg.layers,
            budget: cfg.budget,
            seed: subgraph_seed(cfg, i),
            fold: cfg.fold,
            qubit_cap: cfg.qubits,
        };
        let out = solve_subgraph(&parts.subgraphs[i], &opts);
        active.fetch_sub(1, Ordering::SeqCst);
        out
    };

    for round in &schedule.rounds {
        if round.len() == 1 {
            outcomes[round[0]] = Some(solve(round[0]));
            continue;
        }
        let results: Vec<(usize, Result<SubgraphSolution>)> = thread::scope(|scope| {
            let handles: Vec<_> = round
                .iter()
                .map(|&i| (i, scope.spawn(move || solve(i))))
                .collect();
            handles
                .into_iter()
                .map(|(i, h)| (i, h.join().expect("solver thread panicked")))
                .collect()
        });
        for (i, r) in results {
            outcomes[i] = Some(r);
        }
    }
    Executed {
        outcomes: outcomes
            .into_iter()
            .map(|o| o.expect("every subgraph scheduled"))
            .collect(),
        max_concurrent: peak.load(Ordering::SeqCst),
    }
}

fn summarize(
    index: usize,
    spec: &SubgraphSpec,
    seed: u64,
    sol: &SubgraphSolution,
) -> SubgraphSummary {
    SubgraphSummary {
        index,
        first_vertex: spec.global_ids.first().copied().unwrap_or(0),
        size: spec.size(),
        edges: spec.local_graph.edge_count(),
        seed,
        gammas: sol.params.gammas().to_vec(),
        betas: sol.params.betas().to_vec(),
        expectation: sol.expectation,
        evaluations: sol.evaluations,
        candidates: sol
            .candidates
            .entries
            .iter()
            .map(|c| CandidateSummary {
                bits: bitstring::to_string(c.bits, sol.candidates.width),
                probability: c.probability,
            })
            .collect(),
    }
}

fn run_baseline(g: &Graph, cfg: &RunConfig) -> Result<Option<BaselineSummary>> {
    let timed = |method: &str, f: &dyn Fn() -> Result<crate::graph::CutResult>| {
        let clock = Instant::now();
        let r = f()?;
        Ok::<_, Error>(Some(BaselineSummary {
            method: method.to_string(),
            cut: r.value,
            seconds: clock.elapsed().as_secs_f64(),
            assignment: Some(r.assignment),
        }))
    };
    let local = |restarts: usize| {
        timed(&format!("local-search({restarts})"), &|| {
            local_search_max_cut(g, restarts, cfg.seed)
        })
    };
    match cfg.baseline {
        Baseline::Auto if g.n() <= BRUTE_FORCE_CAP => {
            timed("brute-force", &|| brute_force_max_cut(g))
        }
        Baseline::Auto => local(AUTO_LOCAL_RESTARTS),
        Baseline::Brute => timed("brute-force", &|| brute_force_max_cut(g)),
        Baseline::Local { restarts } => local(restarts),
        Baseline::Value { cut, seconds } => Ok(Some(BaselineSummary {
            method: "external".into(),
            cut,
            seconds,
            assignment: None,
        })),
        Baseline::None => Ok(None),
    }
}
