use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::nelder_mead::NelderMead;
use super::state::{evolve, init_plus_state_with_cap, CostTable};
use super::QaoaParams;
use crate::bitstring;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::SubgraphSpec;

/// Objective tolerance for the simplex spread.
const FTOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct Optimized {
    pub params: QaoaParams,
    pub expectation: f64,
    pub initial_expectation: f64,
    pub evaluations: usize,
}

/// Maximizes the QAOA expectation over `2p` angles from a linear-ramp start.
pub fn optimize_parameters(g: &Graph, p: usize, budget: usize, seed: u64) -> Result<QaoaParams> {
    let cost = CostTable::new(g)?;
    Ok(optimize_with_table(&cost, p, budget, seed)?.params)
}

/// Nelder–Mead over a precomputed cost table. The seed only perturbs the
/// initial simplex step sizes (each in `[0.45, 0.65)`).
pub fn optimize_with_table(
    cost: &CostTable,
    p: usize,
    budget: usize,
    seed: u64,
) -> Result<Optimized> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let start = QaoaParams::linear_ramp(p)?;
    let q = cost.qubits();
    if q == 0 {
        return Ok(Optimized {
            params: start,
            expectation: 0.0,
            initial_expectation: 0.0,
            evaluations: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps: Vec<f64> = (0..2 * p).map(|_| 0.45 + 0.2 * rng.gen::<f64>()).collect();

    let mut state = init_plus_state_with_cap(q, q)?;
    let mut objective = |x: &[f64]| -> f64 {
        state.reset_plus();
        evolve(&mut state, cost, &QaoaParams::from_flat(x)).expect("dimensions fixed");
        -state.expectation(cost).expect("dimensions fixed")
    };
    let x0 = start.to_flat();
    let initial_expectation = -objective(&x0);
    let found = NelderMead::new(budget, FTOL, steps).minimize(&mut objective, &x0);
    Ok(Optimized {
        params: QaoaParams::from_flat(&found.x),
        expectation: -found.value,
        initial_expectation,
        evaluations: found.evaluations,
    })
}

/// Number of candidates kept per subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopK {
    Count(usize),
    /// Every complement class (or every bitstring when folding is off).
    All,
}

impl Default for TopK {
    fn default() -> Self {
        TopK::Count(2)
    }
}

impl fmt::Display for TopK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopK::Count(k) => write!(f, "{k}"),
            TopK::All => f.write_str("all"),
        }
    }
}

impl std::str::FromStr for TopK {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(TopK::All);
        }
        s.parse()
            .map(TopK::Count)
            .map_err(|_| Error::InvalidParameter(format!("invalid top-k {s:?}")))
    }
}

impl Serialize for TopK {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TopK::Count(k) => s.serialize_u64(*k as u64),
            TopK::All => s.serialize_str("all"),
        }
    }
}

impl<'de> Deserialize<'de> for TopK {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct TopKVisitor;
        impl Visitor<'_> for TopKVisitor {
            type Value = TopK;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"all\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<TopK, E> {
                Ok(TopK::Count(v as usize))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<TopK, E> {
                usize::try_from(v)
                    .map(TopK::Count)
                    .map_err(|_| E::custom("top-k must be non-negative"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<TopK, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(TopKVisitor)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub top_k: TopK,
    pub layers: usize,
    pub budget: usize,
    pub seed: u64,
    /// Merge `b` and its complement into one class before ranking.
    pub fold: bool,
    pub qubit_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            top_k: TopK::default(),
            layers: 3,
            budget: 200,
            seed: 0,
            fold: true,
            qubit_cap: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub bits: u64,
    pub probability: f64,
}

/// Highest-probability bitstrings of one subgraph, best first.
///
/// When `folded`, each entry is the canonical member (vertex 0 on side 0)
/// of a complement class and carries the summed class probability.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub width: usize,
    pub folded: bool,
    pub entries: Vec<Candidate>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Ranks a full probability distribution and keeps the top `k`.
    pub fn from_distribution(probabilities: &[f64], top_k: TopK, fold: bool) -> Result<Self> {
        let dim = probabilities.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "distribution length {dim} is not a power of two"
            )));
        }
        let width = dim.trailing_zeros() as usize;
        let mut pool: Vec<Candidate> = if fold {
            let full = bitstring::mask(width);
            (0..dim as u64)
                .step_by(2)
                .map(|z| Candidate {
                    bits: z,
                    probability: probabilities[z as usize] + probabilities[(z ^ full) as usize],
                })
                .collect()
        } else {
            (0..dim as u64)
                .map(|z| Candidate {
                    bits: z,
                    probability: probabilities[z as usize],
                })
                .collect()
        };
        let k = match top_k {
            TopK::All => pool.len(),
            TopK::Count(k) => k,
        };
        if k == 0 {
            return Err(Error::InvalidParameter("top-k must be at least 1".into()));
        }
        if k > pool.len() {
            return Err(Error::InvalidParameter(format!(
                "top-k {k} exceeds the {} available {}",
                pool.len(),
                if fold {
                    "complement classes"
                } else {
                    "bitstrings"
                }
            )));
        }
        let rank = |a: &Candidate, b: &Candidate| -> Ordering {
            b.probability.total_cmp(&a.probability).then_with(|| {
                bitstring::order_key(a.bits, width).cmp(&bitstring::order_key(b.bits, width))
            })
        };
        if k < pool.len() {
            pool.select_nth_unstable_by(k - 1, rank);
            pool.truncate(k);
        }
        pool.sort_by(rank);
        Ok(CandidateSet {
            width,
            folded: fold,
            entries: pool,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubgraphSolution {
    pub candidates: CandidateSet,
    pub params: QaoaParams,
    pub expectation: f64,
    pub evaluations: usize,
}

/// Optimizes angles for the subgraph, simulates the final state and keeps
/// its top-K candidates.
pub fn solve_subgraph(spec: &SubgraphSpec, opts: &SolveOptions) -> Result<SubgraphSolution> {
    let g = &spec.local_graph;
    let q = g.n();
    if q == 0 {
        return Err(Error::InvalidParameter(
            "cannot solve an empty subgraph".into(),
        ));
    }
    if q > opts.qubit_cap {
        return Err(Error::ResourceLimit(format!(
            "subgraph of {q} vertices exceeds the qubit cap {}",
            opts.qubit_cap
        )));
    }
    // Validate K before paying for the optimization.
    let available = if opts.fold {
        1usize << (q - 1)
    } else {
        1usize << q
    };
    if let TopK::Count(k) = opts.top_k {
        if k == 0 || k > available {
            return Err(Error::InvalidParameter(format!(
                "top-k {k} outside 1..={available} for a {q}-vertex subgraph"
            )));
        }
    }
    let cost = CostTable::with_cap(g, opts.qubit_cap)?;
    let opt = optimize_with_table(&cost, opts.layers, opts.budget, opts.seed)?;
    let mut state = init_plus_state_with_cap(q, opts.qubit_cap)?;
    evolve(&mut state, &cost, &opt.params)?;
    let candidates =
        CandidateSet::from_distribution(&state.probabilities(), opts.top_k, opts.fold)?;
    Ok(SubgraphSolution {
        candidates,
        params: opt.params,
        expectation: opt.expectation,
        evaluations: opt.evaluations,
    })
}
