//! Graph families used by tests, benches and the CLI corpus tooling.

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::graph::Graph;
use crate::set::VertexSet;

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
}

/// `K_{1,leaves}` with the centre at index 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
}

/// A host `w` (index 0) with a chain `w-p1-...-p_depth` (indices
/// `1..=depth`) and one pendant leaf on `w` and on each of `p1..p_{depth-1}`
/// (indices `depth+1..=2*depth`). Seeding its leaves infects `w` at
/// time `depth`.
pub fn delay_tree(depth: usize) -> Graph {
    assert!(depth >= 1);
    let chain = (1..=depth).map(|i| (i - 1, i));
    let pendants = (0..depth).map(|i| (i, depth + 1 + i));
    Graph::from_edges(2 * depth + 1, chain.chain(pendants)).unwrap()
}

/// `[w, p1, ..., p_depth]` of [`delay_tree`].
pub fn delay_tree_chain(depth: usize) -> Vec<usize> {
    (0..=depth).collect()
}

/// The degree-1 vertices of [`delay_tree`]: the pendants and the chain end.
pub fn delay_tree_leaves(depth: usize) -> VertexSet {
    VertexSet::from_vertices(2 * depth + 1, (depth + 1..=2 * depth).chain([depth]))
}

/// Erdős–Rényi `G(n, p)`, deterministic in `seed`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// A uniformly random recursive tree plus independent extra edges with
/// probability `p`.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = HashSet::new();
    let mut edges = Vec::new();
    for i in 1..n {
        let a = order[i];
        let b = order[rng.gen_range(0..i)];
        present.insert((a.min(b), a.max(b)));
        edges.push((a, b));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !present.contains(&(a, b)) && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// A random connected bipartite graph: random sides, a spanning tree
/// across them, then extra cross edges with probability `p`.
pub fn random_connected_bipartite(n: usize, p: f64, seed: u64) -> Graph {
    assert!(n >= 2);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut side = vec![false; n];
    // The first two vertices in the order sit on opposite sides so every
    // later vertex has somewhere to attach.
    side[order[1]] = true;
    for &v in &order[2..] {
        side[v] = rng.gen_bool(0.5);
    }
    let mut present = HashSet::new();
    let mut edges = vec![(order[0], order[1])];
    present.insert((order[0].min(order[1]), order[0].max(order[1])));
    for i in 2..n {
        let a = order[i];
        let choices: Vec<usize> = order[..i]
            .iter()
            .copied()
            .filter(|&b| side[b] != side[a])
            .collect();
        let b = *choices.choose(&mut rng).unwrap();
        present.insert((a.min(b), a.max(b)));
        edges.push((a, b));
    }
    for a in 0..n {
        for b in a + 1..n {
            if side[a] != side[b] && !present.contains(&(a, b)) && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Every labelled graph on `n` vertices (`2^(n(n-1)/2)` of them), in
/// order of the edge-subset bit pattern.
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    assert!(pairs.len() < 64, "too many vertices to enumerate");
    (0u64..1 << pairs.len()).map(move |bits| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::from_edges(n, edges).unwrap()
    })
}

pub fn all_connected_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    all_labeled_graphs(n).filter(crate::graph::is_connected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_bipartite, is_connected};

    #[test]
    fn delay_tree_shape() {
        let g = delay_tree(3);
        assert_eq!((g.n(), g.m()), (7, 6));
        assert_eq!(delay_tree_leaves(3).len(), 4);
        for v in delay_tree_leaves(3).iter() {
            assert_eq!(g.degree(v), 1);
        }
        assert_eq!(delay_tree(4).n(), 9);
    }

    #[test]
    fn random_families_have_their_shape() {
        for seed in 0..50 {
            let g = random_connected_graph(10, 0.2, seed);
            assert!(is_connected(&g));
            let b = random_connected_bipartite(11, 0.3, seed);
            assert!(is_connected(&b));
            assert!(is_bipartite(&b).is_some());
        }
        assert_eq!(random_graph(8, 0.5, 7), random_graph(8, 0.5, 7));
    }

    #[test]
    fn labeled_counts() {
        // Connected labelled graphs: OEIS A001187.
        let counts: Vec<usize> = (1..=5)
            .map(|n| all_connected_labeled_graphs(n).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 4, 38, 728]);
    }
}
