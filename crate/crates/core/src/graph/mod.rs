//! Undirected weighted graphs, bipartition assignments and cut evaluation.
//!
//! Vertices are `0..n`. Edges are stored with `u < v`; the input order of
//! edges is otherwise preserved so that serialization is stable.

mod generate;
mod io;
mod oracle;

pub use generate::generate_er_graph;
pub use io::{load_graph, parse_graph, save_graph, to_edge_list};
pub use oracle::{
    brute_force_max_cut, brute_force_max_cut_with_cap, local_search_from, local_search_max_cut,
    BRUTE_FORCE_CAP,
};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, out-of-range endpoints,
    /// duplicate undirected edges and negative or non-finite weights.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            out.push(Edge { u, v, w });
        }
        Ok(Graph { n, edges: out })
    }

    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Construction path for callers that already guarantee the invariants.
    pub(crate) fn from_edges_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.iter().all(|e| e.u < e.v && e.v < n));
        Graph { n, edges }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| Edge { u, v, w: 1.0 }))
            .collect();
        Graph::from_edges_unchecked(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }
}

/// Compressed neighbor lists; `neighbors(v)` yields `(u, w)` pairs.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<(usize, f64)>,
}

impl Adjacency {
    fn new(g: &Graph) -> Self {
        let mut degree = vec![0usize; g.n + 1];
        for e in &g.edges {
            degree[e.u + 1] += 1;
            degree[e.v + 1] += 1;
        }
        for i in 0..g.n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut targets = vec![(0usize, 0.0f64); 2 * g.edges.len()];
        for e in &g.edges {
            targets[fill[e.u]] = (e.v, e.w);
            fill[e.u] += 1;
            targets[fill[e.v]] = (e.u, e.w);
            fill[e.v] += 1;
        }
        Adjacency { offsets, targets }
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// A bipartition: `bits[v] == true` places vertex `v` in S.
///
/// Ordering is lexicographic from vertex 0, i.e. the numeric order of the
/// bitstring written with vertex 0 as the leading digit. Every tie-break in
/// the crate uses this order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Assignment {
            bits: vec![false; n],
        }
    }

    /// Low `n` bits of `word`, vertex `v` taken from bit `v`.
    pub fn from_word(word: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|v| (word >> v) & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "invalid bit {other:?} in assignment"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment::new)
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    pub value: f64,
    pub assignment: Assignment,
}

/// Total weight of edges whose endpoints sit on different sides.
pub fn cut_value(g: &Graph, a: &Assignment) -> Result<f64> {
    if a.len() != g.n {
        return Err(Error::LengthMismatch {
            expected: g.n,
            found: a.len(),
        });
    }
    Ok(cut_value_unchecked(g, a.bits()))
}

pub(crate) fn cut_value_unchecked(g: &Graph, bits: &[bool]) -> f64 {
    g.edges
        .iter()
        .filter(|e| bits[e.u] != bits[e.v])
        .map(|e| e.w)
        .sum()
}

pub fn complement(a: &Assignment) -> Assignment {
    Assignment {
        bits: a.bits.iter().map(|b| !b).collect(),
    }
}
