use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{generate_er_graph, load_graph, Graph};
use crate::merge::{CutMode, DEFAULT_PATH_BUDGET};
use crate::metrics::ALPHA_MEDIUM;
use crate::partition::PartitionScheme;
use crate::qaoa::TopK;

/// Environment variable overriding the default worker count.
pub const WORKERS_ENV: &str = "DCMAXCUT_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSource {
    File { path: PathBuf },
    Er { n: usize, p: f64, seed: u64 },
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::File { path } => load_graph(std::fs::File::open(path)?),
            GraphSource::Er { n, p, seed } => generate_er_graph(*n, *p, *seed),
        }
    }
}

/// Reference solution the algorithm is scored against.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Baseline {
    /// Brute force up to its vertex cap, local search above it.
    #[default]
    Auto,
    Brute,
    Local {
        restarts: usize,
    },
    /// Externally known cut value and the time it took to obtain.
    Value {
        cut: f64,
        #[serde(default)]
        seconds: f64,
    },
    None,
}

pub const AUTO_LOCAL_RESTARTS: usize = 20;

/// Stages counted towards the algorithm time in the efficiency factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgTime {
    /// Partition, QAOA and merge.
    #[default]
    PartitionQaoaMerge,
    QaoaMerge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub graph: GraphSource,
    /// Qubit cap per solver (N).
    pub qubits: usize,
    /// Concurrent solver slots (N_s); resolved from the environment if absent.
    pub solvers: Option<usize>,
    /// Subgraph count (M); derived from `qubits` if absent.
    pub subgraphs: Option<usize>,
    pub top_k: TopK,
    pub merge_level: usize,
    /// Defaults to the solver count.
    pub merge_workers: Option<usize>,
    pub layers: usize,
    pub budget: usize,
    /// Subgraph `i` is optimized with seed `seed + i`.
    pub seed: u64,
    pub alpha: f64,
    pub baseline: Baseline,
    pub partition: PartitionScheme,
    pub fold: bool,
    pub halve_symmetry: bool,
    pub cut_mode: CutMode,
    pub path_budget: u64,
    pub alg_time: AlgTime,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            graph: GraphSource::Er {
                n: 20,
                p: 0.5,
                seed: 0,
            },
            qubits: 20,
            solvers: None,
            subgraphs: None,
            top_k: TopK::default(),
            merge_level: 1,
            merge_workers: None,
            layers: 3,
            budget: 200,
            seed: 0,
            alpha: ALPHA_MEDIUM,
            baseline: Baseline::Auto,
            partition: PartitionScheme::Balanced,
            fold: true,
            halve_symmetry: false,
            cut_mode: CutMode::Full,
            path_budget: DEFAULT_PATH_BUDGET,
            alg_time: AlgTime::default(),
        }
    }
}

/// Default worker count: the environment override, else the available
/// parallelism of the host.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(available_parallelism)
}

pub fn available_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    /// Checks everything that does not need the graph.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if let GraphSource::Er { p, .. } = self.graph {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("edge probability {p} outside [0, 1]"));
            }
        }
        if self.qubits == 0 {
            return bad("qubit cap must be at least 1".into());
        }
        if self.solvers == Some(0) {
            return bad("solver count must be at least 1".into());
        }
        if self.subgraphs == Some(0) {
            return bad("subgraph count must be at least 1".into());
        }
        if self.merge_workers == Some(0) {
            return bad("merge worker count must be at least 1".into());
        }
        if self.merge_level == 0 {
            return bad("merge level must be at least 1".into());
        }
        if self.layers == 0 {
            return bad("QAOA depth must be at least 1".into());
        }
        if self.budget == 0 {
            return bad("optimizer budget must be at least 1".into());
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        match self.baseline {
            Baseline::Local { restarts: 0 } => {
                return bad("local-search baseline needs at least one restart".into())
            }
            Baseline::Value { cut, seconds }
                if !(cut.is_finite() && cut >= 0.0 && seconds >= 0.0) =>
            {
                return bad("baseline value and time must be non-negative".into())
            }
            _ => {}
        }
        Ok(())
    }

    /// Copy with solver and merge-worker counts filled in.
    pub fn resolved(&self) -> RunConfig {
        let solvers = self.solvers.unwrap_or_else(default_workers);
        RunConfig {
            solvers: Some(solvers),
            merge_workers: Some(self.merge_workers.unwrap_or(solvers)),
            ..self.clone()
        }
    }
}
