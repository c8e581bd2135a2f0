//! Exact statevector QAOA for Max-Cut.
//!
//! The cost phase uses the cut value itself, `U_C(gamma) z = exp(-i gamma C(z)) z`,
//! and the mixer applies `exp(-i beta X)` on every qubit. Basis index bit `v`
//! is the side of vertex `v`.

mod nelder_mead;
mod solve;
mod state;

pub use nelder_mead::{Minimum, NelderMead};
pub use solve::{
    optimize_parameters, optimize_with_table, solve_subgraph, Candidate, CandidateSet, Optimized,
    SolveOptions, SubgraphSolution, TopK,
};
pub use state::{
    expectation, init_plus_state, init_plus_state_with_cap, run_ansatz, run_ansatz_with, CostTable,
    StateVector, DEFAULT_QUBIT_CAP,
};

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angles of a depth-`p` ansatz; layer `l` applies `gammas[l]` then `betas[l]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::InvalidParameter(format!(
                "{} gammas but {} betas",
                gammas.len(),
                betas.len()
            )));
        }
        if gammas.is_empty() {
            return Err(Error::InvalidParameter("need at least one layer".into()));
        }
        Ok(QaoaParams { gammas, betas })
    }

    /// `gamma_l = (l/p) pi/2`, `beta_l = (1 - l/p) pi/2` for `l = 1..=p`.
    pub fn linear_ramp(p: usize) -> Result<Self> {
        let pf = p as f64;
        QaoaParams::new(
            (1..=p).map(|l| l as f64 / pf * FRAC_PI_2).collect(),
            (1..=p).map(|l| (1.0 - l as f64 / pf) * FRAC_PI_2).collect(),
        )
    }

    pub fn layers(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Flat `[gammas.., betas..]` vector used by the optimizer.
    pub(crate) fn to_flat(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub(crate) fn from_flat(x: &[f64]) -> Self {
        let p = x.len() / 2;
        QaoaParams {
            gammas: x[..p].to_vec(),
            betas: x[p..].to_vec(),
        }
    }
}
