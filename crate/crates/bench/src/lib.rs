//! Shared inputs for the criterion benches.

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use percolate_core::{gen, CnfFormula, Graph, VertexSet};

/// A random recursive tree plus `n` extra edges, with every vertex of
/// degree below 2 seeded and each other vertex seeded with probability
/// `1/density`. Linear in `n`, unlike the dense generators in core.
pub fn sparse_instance(n: usize, density: u32, seed: u64) -> (Graph, VertexSet) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(2 * n);
    let mut add = |a: usize, b: usize, edges: &mut Vec<(usize, usize)>| {
        if a != b && seen.insert((a.min(b), a.max(b))) {
            edges.push((a, b));
        }
    };
    for v in 1..n {
        add(v, rng.gen_range(0..v), &mut edges);
    }
    for _ in 0..n {
        add(rng.gen_range(0..n), rng.gen_range(0..n), &mut edges);
    }
    let g = Graph::from_edges(n, edges).expect("deduplicated");
    let picked: Vec<usize> = g
        .vertices()
        .filter(|&v| g.degree(v) < 2 || rng.gen_ratio(1, density))
        .collect();
    let s = VertexSet::from_vertices(n, picked);
    (g, s)
}

/// Bipartite graphs sized for the time-4 decider.
pub fn bipartite_corpus(n: usize, count: u64) -> Vec<Graph> {
    (0..count)
        .map(|s| gen::random_connected_bipartite(n, 0.12, s))
        .collect()
}

/// A deterministic 3-CNF with `clauses` clauses over `vars` variables.
pub fn cnf(vars: usize, clauses: usize) -> CnfFormula {
    let lit = |i: usize, j: usize| {
        let v = (i * 7 + j * 13) % vars + 1;
        if (i + j) % 3 == 0 {
            -(v as i32)
        } else {
            v as i32
        }
    };
    let cs = (0..clauses)
        .map(|i| [lit(i, 0), lit(i, 1), lit(i, 2)])
        .collect();
    CnfFormula::new(vars, cs).expect("literals in range")
}
