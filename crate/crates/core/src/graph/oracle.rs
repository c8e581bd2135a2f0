//! Reference solvers: exhaustive enumeration for small graphs and a
//! multi-start greedy local search for everything else.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cut_value_unchecked, Assignment, CutResult, Graph};
use crate::error::{Error, Result};

/// Default vertex cap for [`brute_force_max_cut`]; cost is `2^(n-1)` steps.
pub const BRUTE_FORCE_CAP: usize = 24;

const MAX_ENUMERABLE: usize = 40;

pub fn brute_force_max_cut(g: &Graph) -> Result<CutResult> {
    brute_force_max_cut_with_cap(g, BRUTE_FORCE_CAP)
}

/// Exact maximum cut by Gray-code enumeration with vertex 0 pinned to side 0.
///
/// Each step flips a single vertex and updates the cut incrementally. Among
/// maximizers the smallest bitstring wins.
pub fn brute_force_max_cut_with_cap(g: &Graph, cap: usize) -> Result<CutResult> {
    let n = g.n();
    if n > cap || n > MAX_ENUMERABLE {
        return Err(Error::ResourceLimit(format!(
            "brute force over {n} vertices exceeds the cap of {}",
            cap.min(MAX_ENUMERABLE)
        )));
    }
    if n <= 1 {
        return Ok(CutResult {
            value: 0.0,
            assignment: Assignment::zeros(n),
        });
    }

    let best_word = if g.edges().iter().all(|e| e.w == 1.0) {
        enumerate_unit(g)
    } else {
        enumerate_weighted(g)
    };
    let assignment = Assignment::from_word(best_word, n);
    let value = cut_value_unchecked(g, assignment.bits());
    Ok(CutResult { value, assignment })
}

/// Tie-break key: the bitstring read with vertex 0 as the leading digit.
fn display_key(word: u64, n: usize) -> u64 {
    word.reverse_bits() >> (64 - n)
}

fn enumerate_unit(g: &Graph) -> u64 {
    let n = g.n();
    let mut masks = vec![0u64; n];
    for e in g.edges() {
        masks[e.u] |= 1 << e.v;
        masks[e.v] |= 1 << e.u;
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut word = 0u64;
    let mut value: i64 = 0;
    let (mut best_value, mut best_word) = (0i64, 0u64);
    for step in 1u64..(1u64 << (n - 1)) {
        let v = step.trailing_zeros() as usize + 1;
        let same_side = if (word >> v) & 1 == 1 {
            word
        } else {
            !word & all
        };
        let same = (masks[v] & same_side).count_ones() as i64;
        let deg = masks[v].count_ones() as i64;
        value += same - (deg - same);
        word ^= 1 << v;
        if value > best_value
            || (value == best_value && display_key(word, n) < display_key(best_word, n))
        {
            best_value = value;
            best_word = word;
        }
    }
    best_word
}

fn enumerate_weighted(g: &Graph) -> u64 {
    let n = g.n();
    let adj = g.adjacency();
    let mut word = 0u64;
    let mut value = 0.0f64;
    let (mut best_value, mut best_word) = (0.0f64, 0u64);
    for step in 1u64..(1u64 << (n - 1)) {
        let v = step.trailing_zeros() as usize + 1;
        let side = (word >> v) & 1;
        let delta: f64 = adj
            .neighbors(v)
            .iter()
            .map(|&(u, w)| if (word >> u) & 1 == side { w } else { -w })
            .sum();
        value += delta;
        word ^= 1 << v;
        if value > best_value
            || (value == best_value && display_key(word, n) < display_key(best_word, n))
        {
            best_value = value;
            best_word = word;
        }
    }
    best_word
}

/// Best of `restarts` greedy descents from seeded random starts.
pub fn local_search_max_cut(g: &Graph, restarts: usize, seed: u64) -> Result<CutResult> {
    if restarts == 0 {
        return Err(Error::InvalidParameter(
            "restarts must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<CutResult> = None;
    for _ in 0..restarts {
        let start = Assignment::new((0..g.n()).map(|_| rng.gen::<bool>()).collect());
        let found = local_search_from(g, &start)?;
        let better = match &best {
            None => true,
            Some(b) => {
                found.value > b.value || (found.value == b.value && found.assignment < b.assignment)
            }
        };
        if better {
            best = Some(found);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// Repeatedly flips the vertex with the largest positive gain (lowest index
/// on ties) until no single flip improves the cut.
pub fn local_search_from(g: &Graph, start: &Assignment) -> Result<CutResult> {
    if start.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: start.len(),
        });
    }
    let adj = g.adjacency();
    let mut bits = start.bits().to_vec();
    let mut gain: Vec<f64> = (0..g.n())
        .map(|v| {
            adj.neighbors(v)
                .iter()
                .map(|&(u, w)| if bits[u] == bits[v] { w } else { -w })
                .sum()
        })
        .collect();
    // Relative to the largest weight so float dust never counts as a gain.
    let eps = 1e-12 * g.edges().iter().map(|e| e.w).fold(1.0, f64::max);
    loop {
        let mut pick = None;
        let mut pick_gain = eps;
        for (v, &gv) in gain.iter().enumerate() {
            if gv > pick_gain {
                pick_gain = gv;
                pick = Some(v);
            }
        }
        let Some(v) = pick else { break };
        bits[v] = !bits[v];
        gain[v] = -gain[v];
        for &(u, w) in adj.neighbors(v) {
            if bits[u] == bits[v] {
                gain[u] += 2.0 * w;
            } else {
                gain[u] -= 2.0 * w;
            }
        }
    }
    let value = cut_value_unchecked(g, &bits);
    Ok(CutResult {
        value,
        assignment: Assignment::new(bits),
    })
}
