//! Dense-matrix reference simulation, independent of the library's kernels.
#![allow(dead_code)]

use dcmaxcut::graph::{cut_value, Assignment, Graph};
use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

pub fn cut_of_index(g: &Graph, z: usize) -> f64 {
    cut_value(g, &Assignment::from_word(z as u64, g.n())).unwrap()
}

pub fn plus_state(n: usize) -> Vec<Complex64> {
    let dim = 1usize << n;
    vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim]
}

pub fn cost_diagonal(g: &Graph, gamma: f64) -> Vec<Complex64> {
    (0..1usize << g.n())
        .map(|z| Complex64::from_polar(1.0, -gamma * cut_of_index(g, z)))
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `exp(-i beta X)` on every qubit as one `2^n x 2^n` matrix.
pub fn mixer_matrix(n: usize, beta: f64) -> Matrix {
    let (c, s) = (beta.cos(), beta.sin());
    let rx = vec![
        vec![Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        vec![Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ];
    let mut m = vec![vec![Complex64::new(1.0, 0.0)]];
    for _ in 0..n {
        m = kron(&rx, &m);
    }
    m
}

pub fn matvec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dense_ansatz(g: &Graph, gammas: &[f64], betas: &[f64]) -> Vec<Complex64> {
    let mut psi = plus_state(g.n());
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        let d = cost_diagonal(g, gamma);
        psi = psi.iter().zip(&d).map(|(a, b)| a * b).collect();
        psi = matvec(&mixer_matrix(g.n(), beta), &psi);
    }
    psi
}

pub fn dense_expectation(g: &Graph, psi: &[Complex64]) -> f64 {
    psi.iter()
        .enumerate()
        .map(|(z, a)| a.norm_sqr() * cut_of_index(g, z))
        .sum()
}

pub fn max_amplitude_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Best p=1 expectation for a single unit edge over a `[0, pi]^2` grid.
pub fn single_edge_grid_max(step: f64) -> f64 {
    let g = Graph::unweighted(2, [(0, 1)]).unwrap();
    let steps = (std::f64::consts::PI / step).floor() as usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=steps {
        for j in 0..=steps {
            let psi = dense_ansatz(&g, &[i as f64 * step], &[j as f64 * step]);
            best = best.max(dense_expectation(&g, &psi));
        }
    }
    best
}

/// G(n, p) by geometric skipping over the pair sequence, for sizes where
/// the library's one-draw-per-pair generator is too slow to time.
pub fn sparse_er(n: usize, p: f64, seed: u64) -> Graph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let r: f64 = rng.gen();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Graph::unweighted(n, edges).unwrap()
}
