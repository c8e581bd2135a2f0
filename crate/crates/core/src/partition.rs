//! Chain decomposition of a graph into vertex intervals that overlap in
//! exactly one vertex.
//!
//! With `M` subgraphs over `n` vertices the balanced scheme uses stride
//! `s = ceil((n - 1) / M)`; subgraph `i` (0-based) covers the closed
//! interval `[i*s, min((i+1)*s, n-1)]`. Consecutive intervals share their
//! boundary vertex and every subgraph has at most `s + 1` vertices.
//!
//! The `FloorStride` scheme uses `s = floor(n/M) - 1` with the last interval
//! absorbing the remainder. It is kept for comparison only: its final
//! subgraph can exceed the size bound.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionScheme {
    #[default]
    Balanced,
    FloorStride,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubgraphSpec {
    pub global_ids: Vec<usize>,
    pub local_graph: Graph,
    pub shared_prev: Option<usize>,
    pub shared_next: Option<usize>,
}

impl SubgraphSpec {
    pub fn size(&self) -> usize {
        self.global_ids.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionResult {
    pub subgraphs: Vec<SubgraphSpec>,
    pub inter_edges: Vec<Edge>,
}

impl PartitionResult {
    pub fn len(&self) -> usize {
        self.subgraphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgraphs.is_empty()
    }

    pub fn max_subgraph_size(&self) -> usize {
        self.subgraphs
            .iter()
            .map(SubgraphSpec::size)
            .max()
            .unwrap_or(0)
    }
}

/// Smallest `M` whose balanced layout keeps every subgraph within `qubit_cap`.
pub fn min_subgraphs_for_cap(n: usize, qubit_cap: usize) -> usize {
    if n <= qubit_cap || n <= 1 {
        1
    } else if qubit_cap < 2 {
        usize::MAX
    } else {
        (n - 1).div_ceil(qubit_cap - 1)
    }
}

/// Splits `g` into `m` chained subgraphs. When `qubit_cap` is given, any
/// subgraph above it is an error carrying the minimal admissible `m`.
pub fn partition(
    g: &Graph,
    m: usize,
    scheme: PartitionScheme,
    qubit_cap: Option<usize>,
) -> Result<PartitionResult> {
    let n = g.n();
    if m == 0 {
        return Err(Error::InvalidParameter(
            "subgraph count must be at least 1".into(),
        ));
    }
    let intervals = if m == 1 {
        vec![(0, n.saturating_sub(1))]
    } else {
        if n < m + 1 {
            return Err(Error::InvalidParameter(format!(
                "{m} subgraphs need at least {} vertices, graph has {n}",
                m + 1
            )));
        }
        match scheme {
            PartitionScheme::Balanced => balanced_intervals(n, m)?,
            PartitionScheme::FloorStride => floor_stride_intervals(n, m)?,
        }
    };

    if let Some(cap) = qubit_cap {
        let largest = intervals
            .iter()
            .map(|&(a, b)| if n == 0 { 0 } else { b - a + 1 })
            .max()
            .unwrap_or(0);
        if largest > cap {
            return Err(Error::QubitCapExceeded {
                size: largest,
                cap,
                min_subgraphs: min_subgraphs_for_cap(n, cap),
            });
        }
    }

    Ok(build(g, &intervals))
}

fn balanced_intervals(n: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    let stride = (n - 1).div_ceil(m);
    if (m - 1) * stride >= n - 1 {
        return Err(Error::InvalidParameter(format!(
            "{m} subgraphs with stride {stride} leave trailing subgraphs empty for {n} vertices"
        )));
    }
    Ok((0..m)
        .map(|i| (i * stride, ((i + 1) * stride).min(n - 1)))
        .collect())
}

fn floor_stride_intervals(n: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    let stride = (n / m).saturating_sub(1);
    if stride == 0 {
        return Err(Error::InvalidParameter(format!(
            "floor-stride layout needs at least {} vertices for {m} subgraphs",
            2 * m
        )));
    }
    Ok((0..m)
        .map(|i| {
            let start = i * stride;
            let end = if i + 1 == m { n } else { start + stride + 1 };
            (start, end - 1)
        })
        .collect())
}

/// Builds subgraph specs from closed, chained intervals in one pass over the
/// edges.
fn build(g: &Graph, intervals: &[(usize, usize)]) -> PartitionResult {
    let n = g.n();
    // First interval whose right end reaches v.
    let mut owner = vec![0usize; n];
    let mut i = 0;
    for (v, slot) in owner.iter_mut().enumerate() {
        while intervals[i].1 < v {
            i += 1;
        }
        *slot = i;
    }

    let mut local_edges: Vec<Vec<Edge>> = vec![Vec::new(); intervals.len()];
    let mut inter_edges = Vec::new();
    for e in g.edges() {
        let k = owner[e.v];
        let (start, _) = intervals[k];
        if e.u >= start {
            local_edges[k].push(Edge {
                u: e.u - start,
                v: e.v - start,
                w: e.w,
            });
        } else {
            inter_edges.push(*e);
        }
    }

    let count = intervals.len();
    let subgraphs = intervals
        .iter()
        .zip(local_edges)
        .enumerate()
        .map(|(k, (&(start, end), edges))| {
            let size = if n == 0 { 0 } else { end - start + 1 };
            SubgraphSpec {
                global_ids: (start..start + size).collect(),
                local_graph: Graph::from_edges_unchecked(size, edges),
                shared_prev: (k > 0).then_some(0),
                shared_next: (k + 1 < count).then(|| size - 1),
            }
        })
        .collect();
    PartitionResult {
        subgraphs,
        inter_edges,
    }
}

/// Subgraph on `ids`, relabelled to `0..ids.len()` by position.
pub fn induced_subgraph(g: &Graph, ids: &[usize]) -> Result<Graph> {
    let mut position = HashMap::with_capacity(ids.len());
    for (local, &id) in ids.iter().enumerate() {
        if id >= g.n() {
            return Err(Error::InvalidParameter(format!(
                "vertex {id} out of range for {} vertices",
                g.n()
            )));
        }
        if position.insert(id, local).is_some() {
            return Err(Error::InvalidParameter(format!("duplicate vertex {id}")));
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter_map(|e| {
            let (a, b) = (*position.get(&e.u)?, *position.get(&e.v)?);
            Some((a, b, e.w))
        })
        .collect::<Vec<_>>();
    Graph::new(ids.len(), edges)
}
