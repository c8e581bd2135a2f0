pub mod bitstring;
pub mod error;
pub mod graph;
pub mod merge;
pub mod metrics;
pub mod partition;
pub mod pipeline;
pub mod qaoa;

pub use error::{Error, ErrorKind, Result};
