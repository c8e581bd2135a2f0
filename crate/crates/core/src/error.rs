use thiserror::Error;

/// Errors produced by the solver stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("subgraph of {size} vertices exceeds the qubit cap {cap}; use at least {min_subgraphs} subgraphs")]
    QubitCapExceeded {
        size: usize,
        cap: usize,
        min_subgraphs: usize,
    },

    #[error("merge would visit {paths} paths, above the budget of {budget}")]
    PathBudgetExceeded { paths: f64, budget: u64 },

    #[error("empty candidate set for subgraph {0}")]
    EmptyCandidateSet(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidConfig,
    ResourceGuard,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ResourceLimit(_)
            | Error::QubitCapExceeded { .. }
            | Error::PathBudgetExceeded { .. } => ErrorKind::ResourceGuard,
            Error::Io(_) | Error::Csv(_) => ErrorKind::Io,
            _ => ErrorKind::InvalidConfig,
        }
    }

    /// Process exit code: 1 invalid config, 2 resource guard, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::InvalidConfig => 1,
            ErrorKind::ResourceGuard => 2,
            ErrorKind::Io => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
