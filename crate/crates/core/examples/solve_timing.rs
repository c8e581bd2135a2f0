//! Times a single subgraph solve at a few qubit counts.
//!
//! cargo run --release -p dcmaxcut --example solve_timing -- 12 16 20

use std::time::Instant;

use dcmaxcut::graph::generate_er_graph;
use dcmaxcut::partition::{partition, PartitionScheme};
use dcmaxcut::qaoa::{solve_subgraph, SolveOptions};

fn main() {
    let sizes: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    for q in if sizes.is_empty() {
        vec![12, 16, 20]
    } else {
        sizes
    } {
        let g = generate_er_graph(q, 0.5, 0).unwrap();
        let spec = partition(&g, 1, PartitionScheme::Balanced, None)
            .unwrap()
            .subgraphs
            .remove(0);
        let opts = SolveOptions {
            qubit_cap: 24,
            ..SolveOptions::default()
        };
        let t = Instant::now();
        let sol = solve_subgraph(&spec, &opts).unwrap();
        println!(
            "q={q:2} evals={:3} <C>={:.3} / {:.1}  {:.3}s",
            sol.evaluations,
            sol.expectation,
            g.total_weight(),
            t.elapsed().as_secs_f64()
        );
    }
}
