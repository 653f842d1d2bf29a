//! Isomorphism-free enumeration of small connected graphs.
//!
//! Every connected graph on `n` vertices has a non-cut vertex, so each one
//! arises from a connected graph on `n - 1` vertices by attaching a new
//! vertex to a non-empty neighbourhood. Candidates are bucketed by a
//! colour-refinement invariant and deduplicated with a backtracking
//! isomorphism test inside each bucket.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::graph::Graph;

const MAX_N: usize = 16;

/// Adjacency masks of a graph with at most 16 vertices.
#[derive(Clone)]
struct Small {
    adj: Vec<u16>,
}

impl Small {
    fn to_graph(&self) -> Graph {
        let n = self.adj.len();
        let edges = (0..n).flat_map(|a| {
            (a + 1..n)
                .filter(move |&b| self.adj[a] >> b & 1 == 1)
                .map(move |b| (a, b))
        });
        Graph::from_edges(n, edges).unwrap()
    }

    fn extend(&self, nbhd: u16) -> Small {
        let v = self.adj.len();
        let mut adj = self.adj.clone();
        for (w, mask) in adj.iter_mut().enumerate() {
            if nbhd >> w & 1 == 1 {
                *mask |= 1 << v;
            }
        }
        adj.push(nbhd);
        Small { adj }
    }

    /// Stable colour refinement with canonical relabelling each round.
    /// Returns the colours and a labelling-independent fingerprint.
    fn refine(&self) -> (Vec<u32>, u64) {
        let n = self.adj.len();
        let mut colors: Vec<u32> = self.adj.iter().map(|a| a.count_ones()).collect();
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        n.hash(&mut hasher);
        let mut classes = usize::MAX;
        loop {
            let sigs: Vec<(u32, Vec<u32>)> = (0..n)
                .map(|v| {
                    let mut around: Vec<u32> = (0..n)
                        .filter(|&w| self.adj[v] >> w & 1 == 1)
                        .map(|w| colors[w])
                        .collect();
                    around.sort_unstable();
                    (colors[v], around)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            distinct.hash(&mut hasher);
            for (v, sig) in sigs.iter().enumerate() {
                colors[v] = distinct.binary_search(sig).unwrap() as u32;
            }
            if distinct.len() == classes {
                break;
            }
            classes = distinct.len();
        }
        let mut hist = colors.clone();
        hist.sort_unstable();
        hist.hash(&mut hasher);
        (colors, hasher.finish())
    }
}

fn isomorphic(a: &Small, ca: &[u32], b: &Small, cb: &[u32]) -> bool {
    let n = a.adj.len();
    if n != b.adj.len() {
        return false;
    }
    // Map rare colours first.
    let mut order: Vec<usize> = (0..n).collect();
    let freq = |c: u32| ca.iter().filter(|&&x| x == c).count();
    order.sort_by_key(|&v| (freq(ca[v]), ca[v], v));
    let mut image = vec![usize::MAX; n];
    let mut used = 0u32;
    fn go(
        i: usize,
        order: &[usize],
        a: &Small,
        ca: &[u32],
        b: &Small,
        cb: &[u32],
        image: &mut [usize],
        used: &mut u32,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for w in 0..b.adj.len() {
            if *used >> w & 1 == 1 || cb[w] != ca[v] {
                continue;
            }
            let consistent = order[..i].iter().all(|&pv| {
                let pw = image[pv];
                (a.adj[v] >> pv & 1) == (b.adj[w] >> pw & 1)
            });
            if !consistent {
                continue;
            }
            image[v] = w;
            *used |= 1 << w;
            if go(i + 1, order, a, ca, b, cb, image, used) {
                return true;
            }
            *used &= !(1 << w);
            image[v] = usize::MAX;
        }
        false
    }
    go(0, &order, a, ca, b, cb, &mut image, &mut used)
}

#[derive(Default)]
struct Catalogue {
    buckets: HashMap<u64, Vec<(Small, Vec<u32>)>>,
    order: Vec<Small>,
}

impl Catalogue {
    fn offer(&mut self, g: Small) {
        let (colors, key) = g.refine();
        let bucket = self.buckets.entry(key).or_default();
        if bucket.iter().any(|(h, ch)| isomorphic(&g, &colors, h, ch)) {
            return;
        }
        bucket.push((g.clone(), colors));
        self.order.push(g);
    }
}

/// Every order from 1 to `n`, each level grown from the previous one.
fn grow(n: usize, bipartite: bool) -> Vec<Vec<Small>> {
    assert!(
        (1..=MAX_N).contains(&n),
        "census supports 1..={MAX_N} vertices"
    );
    let mut levels = vec![vec![Small { adj: vec![0] }]];
    for size in 1..n {
        let mut next = Catalogue::default();
        for g in &levels[size - 1] {
            if bipartite {
                let sides = two_colour(g);
                for side in [sides, !sides & ((1u16 << size) - 1)] {
                    for nbhd in submasks(side) {
                        next.offer(g.extend(nbhd));
                    }
                }
            } else {
                for nbhd in 1..(1u16 << size) {
                    next.offer(g.extend(nbhd));
                }
            }
        }
        levels.push(next.order);
    }
    levels
}

fn to_graphs(levels: Vec<Vec<Small>>) -> Vec<Vec<Graph>> {
    levels
        .iter()
        .map(|level| level.iter().map(Small::to_graph).collect())
        .collect()
}

/// Mask of the side containing vertex 0 in a connected bipartite graph.
fn two_colour(g: &Small) -> u16 {
    let n = g.adj.len();
    let mut side = vec![None; n];
    side[0] = Some(true);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if g.adj[v] >> w & 1 == 1 && side[w].is_none() {
                side[w] = Some(!side[v].unwrap());
                stack.push(w);
            }
        }
    }
    (0..n)
        .filter(|&v| side[v] == Some(true))
        .fold(0, |m, v| m | 1 << v)
}

/// Non-empty submasks of `mask`.
fn submasks(mask: u16) -> impl Iterator<Item = u16> {
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        sub = sub.wrapping_sub(1) & mask;
        if sub == 0 {
            done = true;
        }
        Some(out)
    })
}

/// One representative of every connected graph on `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    connected_graphs_by_order(n).pop().unwrap()
}

/// [`connected_graphs`] for every order `1..=max_n`; entry `i` holds the
/// graphs on `i + 1` vertices.
pub fn connected_graphs_by_order(max_n: usize) -> Vec<Vec<Graph>> {
    to_graphs(grow(max_n, false))
}

/// One representative of every connected bipartite graph on `n` vertices.
pub fn connected_bipartite_graphs(n: usize) -> Vec<Graph> {
    connected_bipartite_graphs_by_order(n).pop().unwrap()
}

pub fn connected_bipartite_graphs_by_order(max_n: usize) -> Vec<Vec<Graph>> {
    to_graphs(grow(max_n, true))
}
