//! Parameter grids for batch runs.

use dcmaxcut::pipeline::{GraphSource, RunConfig};
use dcmaxcut::qaoa::TopK;
use dcmaxcut::{Error, Result};
use serde::Deserialize;

/// A base configuration plus axes; an empty axis keeps the base value.
/// Runs are ordered n, p, graph seed, K, L with L varying fastest.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub base: RunConfig,
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    pub graph_seeds: Vec<u64>,
    pub top_k: Vec<TopK>,
    pub merge_level: Vec<usize>,
}

fn axis<T: Clone>(values: &[T], base: T) -> Vec<T> {
    if values.is_empty() {
        vec![base]
    } else {
        values.to_vec()
    }
}

impl SweepGrid {
    pub fn expand(&self) -> Result<Vec<RunConfig>> {
        let varies_graph = !(self.n.is_empty() && self.p.is_empty() && self.graph_seeds.is_empty());
        let (n0, p0, s0) = match &self.base.graph {
            GraphSource::Er { n, p, seed } => (*n, *p, *seed),
            GraphSource::File { .. } if varies_graph => {
                return Err(Error::InvalidParameter(
                    "n, p and graph_seeds axes need an er base graph".into(),
                ))
            }
            GraphSource::File { .. } => (0, 0.0, 0),
        };
        let mut runs = Vec::new();
        for &n in &axis(&self.n, n0) {
            for &p in &axis(&self.p, p0) {
                for &seed in &axis(&self.graph_seeds, s0) {
                    for &top_k in &axis(&self.top_k, self.base.top_k) {
                        for &merge_level in &axis(&self.merge_level, self.base.merge_level) {
                            let mut cfg = self.base.clone();
                            if varies_graph {
                                cfg.graph = GraphSource::Er { n, p, seed };
                            }
                            cfg.top_k = top_k;
                            cfg.merge_level = merge_level;
                            runs.push(cfg);
                        }
                    }
                }
            }
        }
        Ok(runs)
    }
}
