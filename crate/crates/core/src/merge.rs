//! Reconstruction of global assignments from per-subgraph candidates.
//!
//! Level `i` of the search tree is subgraph `i`. Each candidate pool holds
//! every retained bitstring together with its complement, so for a fixed
//! choice at level `i` exactly half of pool `i + 1` agrees on the shared
//! vertex. A complete path therefore has `|B_1| * prod(|B_i| / 2)`
//! realisations, which is `2K^M` for uniform pools of `2K` members.
//!
//! The first `L` levels are expanded into starting paths that are sharded
//! round-robin over a fixed set of workers; each worker runs a depth-first
//! traversal over the remaining levels with a private best, and the results
//! are reduced by (highest value, smallest bitstring).

use std::thread;

use serde::{Deserialize, Serialize};

use crate::bitstring;
use crate::error::{Error, Result};
use crate::graph::{cut_value_unchecked, Assignment, Edge, Graph};
use crate::partition::{PartitionResult, SubgraphSpec};
use crate::qaoa::CandidateSet;

/// Default ceiling on complete paths a merge may visit.
pub const DEFAULT_PATH_BUDGET: u64 = 1_000_000_000;

/// Per-level candidate lists, each closed under complement.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePool {
    pub levels: Vec<Vec<u64>>,
    pub widths: Vec<usize>,
}

impl CandidatePool {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Expands every candidate `b` to the pair `(b, !b)`, keeping class order.
pub fn build_candidate_pools(sets: &[CandidateSet]) -> Result<CandidatePool> {
    let mut levels = Vec::with_capacity(sets.len());
    let mut widths = Vec::with_capacity(sets.len());
    for (i, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptyCandidateSet(i));
        }
        levels.push(
            set.entries
                .iter()
                .flat_map(|c| [c.bits, bitstring::flip(c.bits, set.width)])
                .collect(),
        );
        widths.push(set.width);
    }
    Ok(CandidatePool { levels, widths })
}

/// True when both bitstrings put their shared vertex on the same side.
pub fn compatible(prev: u64, prev_shared: usize, next: u64, next_shared: usize) -> bool {
    bitstring::bit(prev, prev_shared) == bitstring::bit(next, next_shared)
}

/// Appends `next` to a prefix assignment covering global vertices
/// `0..path.len()`, dropping the shared vertex already present.
pub fn concat_assignments(path: &[bool], next: u64, spec: &SubgraphSpec) -> Result<Vec<bool>> {
    let width = spec.size();
    let mut out = path.to_vec();
    match spec.shared_prev {
        None => {
            if !path.is_empty() {
                return Err(Error::InvalidParameter(
                    "first subgraph must start an empty path".into(),
                ));
            }
        }
        Some(shared) => {
            let global = spec.global_ids[shared];
            if path.len() != global + 1 {
                return Err(Error::InvalidParameter(format!(
                    "path of length {} does not end at shared vertex {global}",
                    path.len()
                )));
            }
            if path[global] != bitstring::bit(next, shared) {
                return Err(Error::InvalidParameter(format!(
                    "bitstring {} disagrees on shared vertex {global}",
                    bitstring::to_string(next, width)
                )));
            }
        }
    }
    out.extend(
        (0..width)
            .filter(|&v| Some(v) != spec.shared_prev)
            .map(|v| bitstring::bit(next, v)),
    );
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutMode {
    /// Recompute the cut on the original graph at every leaf.
    #[default]
    Full,
    /// Cached intra-subgraph cuts plus inter-subgraph indicator terms.
    Incremental,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeOptions {
    pub start_level: usize,
    pub workers: usize,
    pub cut_mode: CutMode,
    /// Restrict level 1 to bitstrings with local vertex 0 on side 0.
    pub halve_symmetry: bool,
    pub path_budget: u64,
}

impl Default for MergeOptions {
    fn default() -> Self {
        MergeOptions {
            start_level: 1,
            workers: 1,
            cut_mode: CutMode::Full,
            halve_symmetry: false,
            path_budget: DEFAULT_PATH_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeResult {
    pub best_value: f64,
    pub best_assignment: Assignment,
    pub candidates_evaluated: u64,
    pub starting_paths: u64,
    pub workers: usize,
}

/// Number of complete paths a merge over `pool` visits.
pub fn path_count(pool: &CandidatePool, halve_symmetry: bool) -> f64 {
    pool.levels
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let n = level.len() as f64;
            if i == 0 && !halve_symmetry {
                n
            } else {
                n / 2.0
            }
        })
        .product()
}

/// Level-wise search structure shared read-only by the workers.
struct Plan<'a> {
    graph: &'a Graph,
    /// Global id of local vertex 0 per level; intervals are contiguous.
    starts: Vec<usize>,
    widths: Vec<usize>,
    /// `choices[level][side]`: entries whose shared-prev bit equals `side`.
    /// Level 0 uses side 0 for halving and the full list otherwise.
    choices: Vec<[Vec<u64>; 2]>,
    first: Vec<u64>,
    /// Incremental mode: intra cut per entry and inter edges closed at each level.
    intra: Vec<std::collections::HashMap<u64, f64>>,
    inter_by_level: Vec<Vec<Edge>>,
    cut_mode: CutMode,
}

impl Plan<'_> {
    fn levels(&self) -> usize {
        self.widths.len()
    }

    fn options(&self, level: usize, buffer: &[bool]) -> &[u64] {
        if level == 0 {
            &self.first
        } else {
            let side = buffer[self.starts[level]] as usize;
            &self.choices[level][side]
        }
    }

    /// Writes `bits` for `level` into the buffer and returns the partial
    /// value increment for incremental mode.
    fn place(&self, level: usize, bits: u64, buffer: &mut [bool]) -> f64 {
        let start = self.starts[level];
        for v in 0..self.widths[level] {
            buffer[start + v] = bitstring::bit(bits, v);
        }
        match self.cut_mode {
            CutMode::Full => 0.0,
            CutMode::Incremental => {
                let inter: f64 = self.inter_by_level[level]
                    .iter()
                    .filter(|e| buffer[e.u] != buffer[e.v])
                    .map(|e| e.w)
                    .sum();
                self.intra[level][&bits] + inter
            }
        }
    }

    fn leaf_value(&self, partial: f64, buffer: &[bool]) -> f64 {
        match self.cut_mode {
            CutMode::Full => cut_value_unchecked(self.graph, buffer),
            CutMode::Incremental => partial,
        }
    }
}

struct Best {
    value: f64,
    bits: Vec<bool>,
    evaluated: u64,
}

impl Best {
    fn offer(&mut self, value: f64, buffer: &[bool]) {
        self.evaluated += 1;
        if value > self.value || (value == self.value && buffer < self.bits.as_slice()) {
            self.value = value;
            self.bits.copy_from_slice(buffer);
        }
    }

    fn better_than(&self, other: &Best) -> bool {
        self.value > other.value || (self.value == other.value && self.bits < other.bits)
    }
}

fn depth_first(plan: &Plan, level: usize, partial: f64, buffer: &mut [bool], best: &mut Best) {
    if level == plan.levels() {
        let value = plan.leaf_value(partial, buffer);
        best.offer(value, buffer);
        return;
    }
    // The options slice depends on the shared bit already in the buffer,
    // which this level never rewrites with a different value.
    let count = plan.options(level, buffer).len();
    for i in 0..count {
        let bits = plan.options(level, buffer)[i];
        let step = plan.place(level, bits, buffer);
        depth_first(plan, level + 1, partial + step, buffer, best);
    }
}

/// Enumerates all compatible completions of the candidate pools and returns
/// the best global assignment.
pub fn level_aware_merge(
    pool: &CandidatePool,
    g: &Graph,
    partition: &PartitionResult,
    opts: &MergeOptions,
) -> Result<MergeResult> {
    let m = pool.len();
    if m == 0 || m != partition.len() {
        return Err(Error::InvalidParameter(format!(
            "pool has {m} levels but the partition has {} subgraphs",
            partition.len()
        )));
    }
    if opts.start_level == 0 || opts.start_level > m {
        return Err(Error::InvalidParameter(format!(
            "start level {} outside 1..={m}",
            opts.start_level
        )));
    }
    if opts.workers == 0 {
        return Err(Error::InvalidParameter(
            "need at least one merge worker".into(),
        ));
    }
    let plan = build_plan(pool, g, partition, opts)?;

    let total = path_count(pool, opts.halve_symmetry);
    if total > opts.path_budget as f64 {
        return Err(Error::PathBudgetExceeded {
            paths: total,
            budget: opts.path_budget,
        });
    }
    let starting: u64 = (0..opts.start_level)
        .map(|level| {
            if level == 0 {
                plan.first.len() as u64
            } else {
                pool.levels[level].len() as u64 / 2
            }
        })
        .product();

    let run_shard = |worker: usize| -> Best {
        let mut best = Best {
            value: f64::NEG_INFINITY,
            bits: vec![false; g.n()],
            evaluated: 0,
        };
        let mut buffer = vec![false; g.n()];
        let mut index = worker as u64;
        while index < starting {
            let partial = decode_prefix(&plan, opts.start_level, index, &mut buffer);
            depth_first(&plan, opts.start_level, partial, &mut buffer, &mut best);
            index += opts.workers as u64;
        }
        best
    };

    let bests: Vec<Best> = if opts.workers == 1 {
        vec![run_shard(0)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..opts.workers)
                .map(|w| scope.spawn(move || run_shard(w)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("merge worker panicked"))
                .collect()
        })
    };

    let evaluated = bests.iter().map(|b| b.evaluated).sum();
    let best = bests
        .into_iter()
        .reduce(|a, b| if b.better_than(&a) { b } else { a })
        .expect("at least one worker");
    let best_value = cut_value_unchecked(g, &best.bits);
    Ok(MergeResult {
        best_value,
        best_assignment: Assignment::new(best.bits),
        candidates_evaluated: evaluated,
        starting_paths: starting,
        workers: opts.workers,
    })
}

/// Writes starting path `index` (mixed radix over the first `levels`
/// levels, level 0 most significant) into `buffer`.
fn decode_prefix(plan: &Plan, levels: usize, index: u64, buffer: &mut [bool]) -> f64 {
    let mut radices = Vec::with_capacity(levels);
    for level in 0..levels {
        radices.push(if level == 0 {
            plan.first.len() as u64
        } else {
            plan.choices[level][0].len() as u64
        });
    }
    let mut digits = vec![0u64; levels];
    let mut rest = index;
    for level in (0..levels).rev() {
        digits[level] = rest % radices[level];
        rest /= radices[level];
    }
    let mut partial = 0.0;
    for (level, &digit) in digits.iter().enumerate() {
        let bits = plan.options(level, buffer)[digit as usize];
        partial += plan.place(level, bits, buffer);
    }
    partial
}

fn build_plan<'a>(
    pool: &CandidatePool,
    g: &'a Graph,
    partition: &PartitionResult,
    opts: &MergeOptions,
) -> Result<Plan<'a>> {
    let m = pool.len();
    let mut starts = Vec::with_capacity(m);
    let mut next_start = 0usize;
    for (i, spec) in partition.subgraphs.iter().enumerate() {
        let width = spec.size();
        if pool.widths[i] != width {
            return Err(Error::InvalidParameter(format!(
                "level {i} has width {} but subgraph {i} has {width} vertices",
                pool.widths[i]
            )));
        }
        let start = spec.global_ids.first().copied().unwrap_or(0);
        let contiguous = spec
            .global_ids
            .iter()
            .enumerate()
            .all(|(j, &v)| v == start + j);
        if !contiguous || start != next_start {
            return Err(Error::InvalidParameter(format!(
                "subgraph {i} is not a contiguous chain interval"
            )));
        }
        if i > 0 && (spec.shared_prev != Some(0) || width < 1) {
            return Err(Error::InvalidParameter(format!(
                "subgraph {i} does not share its first vertex"
            )));
        }
        if i + 1 < m && spec.shared_next != Some(width - 1) {
            return Err(Error::InvalidParameter(format!(
                "subgraph {i} does not share its last vertex"
            )));
        }
        starts.push(start);
        next_start = start + width - 1;
        if !pool.levels[i].len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "pool level {i} is not closed under complement"
            )));
        }
    }
    if next_start + 1 != g.n() && !(g.n() == 0 && m == 1) {
        return Err(Error::InvalidParameter(
            "partition does not cover the graph".into(),
        ));
    }

    let choices: Vec<[Vec<u64>; 2]> = pool
        .levels
        .iter()
        .map(|level| {
            let (zero, one): (Vec<u64>, Vec<u64>) = level.iter().partition(|&&b| b & 1 == 0);
            [zero, one]
        })
        .collect();
    for (i, c) in choices.iter().enumerate().skip(1) {
        if c[0].len() != c[1].len() {
            return Err(Error::InvalidParameter(format!(
                "pool level {i} is not closed under complement"
            )));
        }
    }
    let first = if opts.halve_symmetry {
        choices[0][0].clone()
    } else {
        pool.levels[0].clone()
    };

    let (intra, inter_by_level) = match opts.cut_mode {
        CutMode::Full => (Vec::new(), Vec::new()),
        CutMode::Incremental => {
            let intra = pool
                .levels
                .iter()
                .zip(&partition.subgraphs)
                .map(|(level, spec)| {
                    level
                        .iter()
                        .map(|&b| {
                            let bits: Vec<bool> =
                                (0..spec.size()).map(|v| bitstring::bit(b, v)).collect();
                            (b, cut_value_unchecked(&spec.local_graph, &bits))
                        })
                        .collect()
                })
                .collect();
            // An inter edge is settled once its later endpoint is written.
            let mut owner = vec![0usize; g.n()];
            for (level, &start) in starts.iter().enumerate().rev() {
                owner[start..start + pool.widths[level]].fill(level);
            }
            let mut inter_by_level = vec![Vec::new(); m];
            for e in &partition.inter_edges {
                inter_by_level[owner[e.u].max(owner[e.v])].push(*e);
            }
            (intra, inter_by_level)
        }
    };

    Ok(Plan {
        graph: g,
        starts,
        widths: pool.widths.clone(),
        choices,
        first,
        intra,
        inter_by_level,
        cut_mode: opts.cut_mode,
    })
}
