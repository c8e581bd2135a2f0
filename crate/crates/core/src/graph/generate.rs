use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, Graph};
use crate::error::{Error, Result};

/// G(n, p) random graph with unit weights.
///
/// Pairs are visited in `(u, v)`, `u < v` lexicographic order and each pair
/// consumes exactly one uniform `f64` from a `ChaCha8Rng` seeded with
/// `seed_from_u64(seed)`; the pair is kept when the draw is below `p`.
pub fn generate_er_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push(Edge { u, v, w: 1.0 });
            }
        }
    }
    Ok(Graph::from_edges_unchecked(n, edges))
}
