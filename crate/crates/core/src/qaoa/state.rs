use num_complex::Complex64;

use super::QaoaParams;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Hard memory guard for a single statevector (`2^24` amplitudes = 256 MiB).
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Low qubits are applied block-wise so each block stays cache resident.
const BLOCK_QUBITS: usize = 13;

/// Cut value of every computational basis state of a graph.
///
/// Basis index `z` encodes vertex `v` in bit `v`. When all cut values are
/// small non-negative integers the phase layer uses a per-level lookup
/// instead of one `cis` per amplitude.
#[derive(Debug, Clone)]
pub struct CostTable {
    qubits: usize,
    values: Vec<f64>,
    levels: Option<usize>,
    total_weight: f64,
}

impl CostTable {
    pub fn new(g: &Graph) -> Result<Self> {
        Self::with_cap(g, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(g: &Graph, cap: usize) -> Result<Self> {
        let q = g.n();
        check_qubits(q, cap)?;
        let dim = 1usize << q;
        let adj = g.adjacency();
        let mut values = vec![0.0f64; dim];
        // values[z] from values[z without its top bit]: raising vertex t
        // cuts edges to 0-side neighbours and heals edges to 1-side ones.
        for z in 1..dim {
            let t = usize::BITS as usize - 1 - z.leading_zeros() as usize;
            let prev = z ^ (1 << t);
            let delta: f64 = adj
                .neighbors(t)
                .iter()
                .map(|&(u, w)| if (z >> u) & 1 == 0 { w } else { -w })
                .sum();
            values[z] = values[prev] + delta;
        }
        let total_weight = g.total_weight();
        let integral = g.edges().iter().all(|e| e.w.fract() == 0.0);
        let levels = (integral && total_weight <= 1e6).then_some(total_weight as usize + 1);
        Ok(CostTable {
            qubits: q,
            values,
            levels,
            total_weight,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Uniform superposition over `q` qubits.
pub fn init_plus_state(q: usize) -> Result<StateVector> {
    init_plus_state_with_cap(q, DEFAULT_QUBIT_CAP)
}

pub fn init_plus_state_with_cap(q: usize, cap: usize) -> Result<StateVector> {
    if q == 0 {
        return Err(Error::InvalidParameter(
            "state needs at least one qubit".into(),
        ));
    }
    check_qubits(q, cap)?;
    let dim = 1usize << q;
    let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    Ok(StateVector {
        qubits: q,
        amplitudes: vec![a; dim],
    })
}

fn check_qubits(q: usize, cap: usize) -> Result<()> {
    if q > cap {
        return Err(Error::ResourceLimit(format!(
            "{q} qubits exceed the statevector cap of {cap}"
        )));
    }
    Ok(())
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        Ok(StateVector {
            qubits: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn reset_plus(&mut self) {
        let a = Complex64::new(1.0 / (self.amplitudes.len() as f64).sqrt(), 0.0);
        self.amplitudes.fill(a);
    }

    fn check_dim(&self, cost: &CostTable) -> Result<()> {
        if cost.qubits != self.qubits {
            return Err(Error::LengthMismatch {
                expected: self.qubits,
                found: cost.qubits,
            });
        }
        Ok(())
    }

    /// Multiplies amplitude `z` by `exp(-i * gamma * C(z))`.
    pub fn apply_cost_layer(&mut self, cost: &CostTable, gamma: f64) -> Result<()> {
        self.check_dim(cost)?;
        let phases = PhaseTable::new(cost, gamma);
        phases.apply(&mut self.amplitudes, &cost.values, 0);
        Ok(())
    }

    /// Applies `exp(-i * beta * X)` to every qubit.
    pub fn apply_mixer_layer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        let q = self.qubits;
        let low = q.min(BLOCK_QUBITS);
        for block in self.amplitudes.chunks_mut(1 << low) {
            for k in 0..low {
                rotate_x(block, k, c, s);
            }
        }
        for k in low..q {
            rotate_x(&mut self.amplitudes, k, c, s);
        }
    }

    /// One cost layer followed by one mixer layer, fused so the phase
    /// multiply and the low-qubit rotations share a pass over each block.
    pub fn apply_layer(&mut self, cost: &CostTable, gamma: f64, beta: f64) -> Result<()> {
        self.check_dim(cost)?;
        let phases = PhaseTable::new(cost, gamma);
        let (s, c) = beta.sin_cos();
        let q = self.qubits;
        let low = q.min(BLOCK_QUBITS);
        let block_len = 1 << low;
        for (b, block) in self.amplitudes.chunks_mut(block_len).enumerate() {
            phases.apply(block, &cost.values, b * block_len);
            for k in 0..low {
                rotate_x(block, k, c, s);
            }
        }
        for k in low..q {
            rotate_x(&mut self.amplitudes, k, c, s);
        }
        Ok(())
    }

    /// `sum_z |psi_z|^2 * C(z)`.
    pub fn expectation(&self, cost: &CostTable) -> Result<f64> {
        self.check_dim(cost)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&cost.values)
            .map(|(a, c)| a.norm_sqr() * c)
            .sum())
    }
}

enum PhaseTable {
    Levels(Vec<Complex64>),
    Direct(f64),
}

impl PhaseTable {
    fn new(cost: &CostTable, gamma: f64) -> Self {
        match cost.levels {
            Some(count) => PhaseTable::Levels(
                (0..count)
                    .map(|c| Complex64::cis(-gamma * c as f64))
                    .collect(),
            ),
            None => PhaseTable::Direct(gamma),
        }
    }

    fn apply(&self, amps: &mut [Complex64], values: &[f64], offset: usize) {
        let values = &values[offset..offset + amps.len()];
        match self {
            PhaseTable::Levels(table) => {
                for (a, &c) in amps.iter_mut().zip(values) {
                    *a *= table[c as usize];
                }
            }
            PhaseTable::Direct(gamma) => {
                for (a, &c) in amps.iter_mut().zip(values) {
                    *a *= Complex64::cis(-gamma * c);
                }
            }
        }
    }
}

/// `[[c, -i s], [-i s, c]]` on qubit `k` of `amps`.
#[inline]
fn rotate_x(amps: &mut [Complex64], k: usize, c: f64, s: f64) {
    let stride = 1 << k;
    for pair in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = pair.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (ar, ai, br, bi) = (a.re, a.im, b.re, b.im);
            *a = Complex64::new(c * ar + s * bi, c * ai - s * br);
            *b = Complex64::new(c * br + s * ai, c * bi - s * ar);
        }
    }
}

/// `U_M(beta_p) U_C(gamma_p) ... U_M(beta_1) U_C(gamma_1) |+>^n`.
pub fn run_ansatz(g: &Graph, params: &QaoaParams) -> Result<StateVector> {
    let cost = CostTable::new(g)?;
    run_ansatz_with(&cost, params)
}

pub fn run_ansatz_with(cost: &CostTable, params: &QaoaParams) -> Result<StateVector> {
    let mut state = init_plus_state_with_cap(cost.qubits, cost.qubits)?;
    evolve(&mut state, cost, params)?;
    Ok(state)
}

pub(crate) fn evolve(state: &mut StateVector, cost: &CostTable, params: &QaoaParams) -> Result<()> {
    for (&gamma, &beta) in params.gammas().iter().zip(params.betas()) {
        state.apply_layer(cost, gamma, beta)?;
    }
    Ok(())
}

pub fn expectation(state: &StateVector, g: &Graph) -> Result<f64> {
    if g.n() != state.qubits {
        return Err(Error::LengthMismatch {
            expected: state.qubits,
            found: g.n(),
        });
    }
    state.expectation(&CostTable::with_cap(g, state.qubits)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cut_value, generate_er_graph, Assignment};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn plus_state_amplitudes() {
        let s = init_plus_state(1).unwrap();
        assert!(s
            .amplitudes()
            .iter()
            .all(|a| (a.re - FRAC_1_SQRT_2).abs() < 1e-15));
        let s = init_plus_state(3).unwrap();
        assert!(s
            .amplitudes()
            .iter()
            .all(|a| (a.re - 0.353_553_390_593_273_8).abs() < 1e-15));
        for q in 1..=20 {
            assert!((init_plus_state(q).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn plus_state_guards() {
        assert!(matches!(init_plus_state(25), Err(Error::ResourceLimit(_))));
        assert!(init_plus_state(0).is_err());
        assert!(init_plus_state_with_cap(5, 4).is_err());
    }

    #[test]
    fn cost_table_matches_cut_value() {
        let g = generate_er_graph(9, 0.5, 3).unwrap();
        let t = CostTable::new(&g).unwrap();
        for z in 0..(1u64 << 9) {
            let a = Assignment::from_word(z, 9);
            assert_eq!(t.values()[z as usize], cut_value(&g, &a).unwrap());
        }
    }

    #[test]
    fn zero_gamma_is_identity() {
        let g = generate_er_graph(5, 0.5, 1).unwrap();
        let cost = CostTable::new(&g).unwrap();
        let mut s = init_plus_state(5).unwrap();
        let before = s.clone();
        s.apply_cost_layer(&cost, 0.0).unwrap();
        assert_eq!(s, before);
        s.apply_mixer_layer(0.0);
        assert_eq!(s, before);
    }

    #[test]
    fn single_edge_cost_phase_at_pi() {
        let g = Graph::unweighted(2, [(0, 1)]).unwrap();
        let cost = CostTable::new(&g).unwrap();
        let mut s = init_plus_state(2).unwrap();
        s.apply_cost_layer(&cost, PI).unwrap();
        let want = [0.5, -0.5, -0.5, 0.5];
        for (a, w) in s.amplitudes().iter().zip(want) {
            assert!(close(*a, Complex64::new(w, 0.0), 1e-15), "{a}");
        }
    }

    #[test]
    fn mixer_full_rotation() {
        let mut s =
            StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
                .unwrap();
        s.apply_mixer_layer(PI / 2.0);
        assert!(close(s.amplitudes()[0], Complex64::new(0.0, 0.0), 1e-15));
        assert!(close(s.amplitudes()[1], Complex64::new(0.0, -1.0), 1e-15));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = Graph::complete(3);
        let cost = CostTable::new(&g).unwrap();
        let mut s = init_plus_state(4).unwrap();
        assert!(s.apply_cost_layer(&cost, 0.3).is_err());
        assert!(s.expectation(&cost).is_err());
        assert!(expectation(&s, &g).is_err());
    }

    #[test]
    fn uniform_expectation_is_half_total_weight() {
        let edge = Graph::unweighted(2, [(0, 1)]).unwrap();
        let s = init_plus_state(2).unwrap();
        assert!((expectation(&s, &edge).unwrap() - 0.5).abs() < 1e-15);
        let g = generate_er_graph(10, 0.5, 0).unwrap();
        let s = init_plus_state(10).unwrap();
        assert!((expectation(&s, &g).unwrap() - g.total_weight() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_params_give_uniform_state() {
        let g = generate_er_graph(6, 0.5, 0).unwrap();
        let params = QaoaParams::new(vec![0.0; 3], vec![0.0; 3]).unwrap();
        let s = run_ansatz(&g, &params).unwrap();
        assert_eq!(s, init_plus_state(6).unwrap());
    }

    #[test]
    fn fused_layer_equals_separate_layers() {
        for q in [3usize, 14, 15] {
            let g = generate_er_graph(q, 0.4, q as u64).unwrap();
            let cost = CostTable::new(&g).unwrap();
            let mut fused = init_plus_state(q).unwrap();
            let mut split = fused.clone();
            fused.apply_layer(&cost, 0.4, 0.9).unwrap();
            split.apply_cost_layer(&cost, 0.4).unwrap();
            split.apply_mixer_layer(0.9);
            for (a, b) in fused.amplitudes().iter().zip(split.amplitudes()) {
                assert!(close(*a, *b, 1e-15));
            }
        }
    }

    #[test]
    fn weighted_graphs_use_direct_phases() {
        let g = Graph::new(3, [(0, 1, 0.5), (1, 2, 1.25)]).unwrap();
        let cost = CostTable::new(&g).unwrap();
        assert!(cost.levels.is_none());
        let mut s = init_plus_state(3).unwrap();
        s.apply_cost_layer(&cost, 0.7).unwrap();
        let a = 1.0 / 8f64.sqrt();
        for (z, amp) in s.amplitudes().iter().enumerate() {
            let want = Complex64::cis(-0.7 * cost.values()[z]) * a;
            assert!(close(*amp, want, 1e-15));
        }
    }
}
