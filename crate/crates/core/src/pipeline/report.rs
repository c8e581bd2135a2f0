//! Report types and their JSON / CSV serialization.
//!
//! The JSON layout is versioned by [`SCHEMA_VERSION`]; fields are only ever
//! added within a version.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Assignment;
use crate::merge::MergeResult;
use crate::metrics::PeiReport;

use super::config::{GraphSource, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Config,
    Graph,
    Partition,
    Qaoa,
    Merge,
    Baseline,
    Metrics,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Stage::Config => "config",
            Stage::Graph => "graph",
            Stage::Partition => "partition",
            Stage::Qaoa => "qaoa",
            Stage::Merge => "merge",
            Stage::Baseline => "baseline",
            Stage::Metrics => "metrics",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "kebab-case")]
pub enum RunStatus {
    Complete,
    Failed { stage: Stage, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub total_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSummary {
    pub slots: usize,
    pub rounds: usize,
    /// Subgraph indices per round, in launch order.
    pub plan: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSummary {
    pub bits: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphSummary {
    pub index: usize,
    pub first_vertex: usize,
    pub size: usize,
    pub edges: usize,
    pub seed: u64,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub expectation: f64,
    pub evaluations: usize,
    pub candidates: Vec<CandidateSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSummary {
    pub method: String,
    pub cut: f64,
    pub seconds: f64,
    pub assignment: Option<Assignment>,
}

/// Wall-clock observations; these vary between identical runs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub graph_seconds: f64,
    pub partition_seconds: f64,
    pub qaoa_seconds: f64,
    pub merge_seconds: f64,
    pub baseline_seconds: f64,
    /// Time fed to the efficiency factor.
    pub alg_seconds: f64,
    /// Highest number of subgraph solves observed running at once.
    pub max_concurrent_solves: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
    pub available_parallelism: usize,
}

impl Environment {
    pub fn capture() -> Self {
        Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            available_parallelism: super::config::available_parallelism(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub status: RunStatus,
    pub config: RunConfig,
    pub graph: Option<GraphSummary>,
    pub subgraph_count: Option<usize>,
    pub inter_edges: Option<usize>,
    pub schedule: Option<ScheduleSummary>,
    pub subgraphs: Vec<SubgraphSummary>,
    pub merge: Option<MergeResult>,
    pub baseline: Option<BaselineSummary>,
    pub metrics: Option<PeiReport>,
    /// Set when the algorithm beats a heuristic baseline.
    pub ar_exceeds_one: bool,
    pub warnings: Vec<String>,
    pub timings: Timings,
    pub environment: Environment,
}

impl ExperimentReport {
    pub fn new(config: RunConfig) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            status: RunStatus::Complete,
            config,
            graph: None,
            subgraph_count: None,
            inter_edges: None,
            schedule: None,
            subgraphs: Vec::new(),
            merge: None,
            baseline: None,
            metrics: None,
            ar_exceeds_one: false,
            warnings: Vec::new(),
            timings: Timings::default(),
            environment: Environment::capture(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.status == RunStatus::Complete
    }

    /// The flat summary row written in CSV mode.
    pub fn csv_row(&self) -> CsvRow {
        let (p, graph_seed) = match self.config.graph {
            GraphSource::Er { p, seed, .. } => (Some(p), Some(seed)),
            GraphSource::File { .. } => (None, None),
        };
        let stage = match &self.status {
            RunStatus::Complete => String::new(),
            RunStatus::Failed { stage, .. } => stage.to_string(),
        };
        CsvRow {
            n: self.graph.as_ref().map(|g| g.n),
            edges: self.graph.as_ref().map(|g| g.edges),
            p,
            graph_seed,
            seed: self.config.seed,
            m: self.subgraph_count,
            k: self.config.top_k.to_string(),
            l: self.config.merge_level,
            cut: self.merge.as_ref().map(|m| m.best_value),
            baseline_cut: self.baseline.as_ref().map(|b| b.cut),
            ar: self.metrics.map(|r| r.ar),
            ef: self.metrics.map(|r| r.ef),
            pei: self.metrics.map(|r| r.pei),
            partition_s: self.timings.partition_seconds,
            qaoa_s: self.timings.qaoa_seconds,
            merge_s: self.timings.merge_seconds,
            baseline_s: self.timings.baseline_seconds,
            alg_s: self.timings.alg_seconds,
            failed_stage: stage,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: Option<usize>,
    pub edges: Option<usize>,
    pub p: Option<f64>,
    pub graph_seed: Option<u64>,
    pub seed: u64,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "L")]
    pub l: usize,
    pub cut: Option<f64>,
    pub baseline_cut: Option<f64>,
    #[serde(rename = "AR")]
    pub ar: Option<f64>,
    #[serde(rename = "EF")]
    pub ef: Option<f64>,
    #[serde(rename = "PEI")]
    pub pei: Option<f64>,
    pub partition_s: f64,
    pub qaoa_s: f64,
    pub merge_s: f64,
    pub baseline_s: f64,
    pub alg_s: f64,
    pub failed_stage: String,
}

pub const CSV_HEADER: &str = "n,edges,p,graph_seed,seed,M,K,L,cut,baseline_cut,AR,EF,PEI,\
partition_s,qaoa_s,merge_s,baseline_s,alg_s,failed_stage";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown report format {other:?}"
            ))),
        }
    }
}

pub fn emit_report<W: Write>(
    report: &ExperimentReport,
    sink: W,
    format: ReportFormat,
) -> Result<()> {
    match format {
        ReportFormat::Json => emit_json(std::slice::from_ref(report), sink, false),
        ReportFormat::Csv => emit_csv(std::slice::from_ref(report), sink),
    }
}

/// Pretty JSON; a single report is written bare unless `as_array`.
pub fn emit_json<W: Write>(
    reports: &[ExperimentReport],
    mut sink: W,
    as_array: bool,
) -> Result<()> {
    if as_array || reports.len() != 1 {
        serde_json::to_writer_pretty(&mut sink, reports)?;
    } else {
        serde_json::to_writer_pretty(&mut sink, &reports[0])?;
    }
    sink.write_all(b"\n")?;
    sink.flush()?;
    Ok(())
}

/// One header line followed by one row per report.
pub fn emit_csv<W: Write>(reports: &[ExperimentReport], sink: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(sink);
    writer.write_record(CSV_HEADER.split(','))?;
    for r in reports {
        writer.serialize(r.csv_row())?;
    }
    writer.flush()?;
    Ok(())
}
