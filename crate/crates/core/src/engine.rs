//! The 2-neighbour infection process.
//!
//! Rounds are simulated by frontier propagation: every vertex keeps a
//! counter of infected neighbours, and only the vertices infected in the
//! previous round push increments, so a full run costs `O(n + m)`.

use std::fmt;

use thiserror::Error;

use crate::graph::Graph;
use crate::set::VertexSet;

/// The infection threshold used by every decision procedure.
pub const THRESHOLD: usize = 2;

/// Infection round of a vertex. `NEVER` orders above every finite time,
/// so `time >= k` holds for vertices that are never infected.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Time(u32);

impl Time {
    pub const NEVER: Time = Time(u32::MAX);

    pub const fn at(t: u32) -> Time {
        assert!(t != u32::MAX);
        Time(t)
    }

    pub fn is_never(self) -> bool {
        self == Time::NEVER
    }

    pub fn finite(self) -> Option<u32> {
        (!self.is_never()).then_some(self.0)
    }

    pub fn is_exactly(self, k: u32) -> bool {
        self.finite() == Some(k)
    }
}

impl fmt::Debug for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite() {
            Some(t) => write!(f, "{t}"),
            None => f.write_str("never"),
        }
    }
}

impl From<u32> for Time {
    fn from(t: u32) -> Time {
        Time::at(t)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("seed does not percolate")]
    NotAHullSet,
    #[error("seed already percolates at time 0")]
    AlreadyTimeZero,
}

/// Per-vertex infection times for one seed set.
#[derive(Clone, PartialEq, Eq)]
pub struct InfectionTrace {
    seed: VertexSet,
    times: Vec<Time>,
}

impl fmt::Debug for InfectionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InfectionTrace")
            .field("seed", &self.seed)
            .field("times", &self.times)
            .finish()
    }
}

impl InfectionTrace {
    pub fn seed(&self) -> &VertexSet {
        &self.seed
    }

    pub fn times(&self) -> &[Time] {
        &self.times
    }

    pub fn time(&self, v: usize) -> Result<Time, EngineError> {
        self.times
            .get(v)
            .copied()
            .ok_or(EngineError::InvalidVertex {
                vertex: v,
                n: self.times.len(),
            })
    }

    pub fn percolates(&self) -> bool {
        self.times.iter().all(|t| !t.is_never())
    }

    /// Latest finite infection time, `None` only for the empty graph.
    pub fn max_time(&self) -> Option<u32> {
        self.times.iter().filter_map(|t| t.finite()).max()
    }

    /// `t(G,S)`: the max time if the seed percolates, otherwise `NEVER`.
    pub fn percolation_time(&self) -> Time {
        if self.percolates() {
            Time::at(self.max_time().unwrap_or(0))
        } else {
            Time::NEVER
        }
    }

    pub fn infected(&self) -> VertexSet {
        VertexSet::from_vertices(
            self.times.len(),
            self.times
                .iter()
                .enumerate()
                .filter(|(_, t)| !t.is_never())
                .map(|(v, _)| v),
        )
    }

    /// Vertices whose time is exactly `k`, ascending.
    pub fn at_time(&self, k: u32) -> impl Iterator<Item = usize> + '_ {
        self.times
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.is_exactly(k))
            .map(|(v, _)| v)
    }

    /// Re-derives every time from the local threshold rule. Returns the
    /// first vertex whose recorded time is inconsistent.
    pub fn check_local_rule(&self, g: &Graph, r: usize) -> Result<(), String> {
        for v in g.vertices() {
            let t = self.times[v];
            let in_seed = self.seed.contains(v);
            if t.is_exactly(0) != in_seed {
                return Err(format!(
                    "vertex {v}: time {t} but seed membership {in_seed}"
                ));
            }
            let before = |bound: u32| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| self.times[w].finite().is_some_and(|tw| tw <= bound))
                    .count()
            };
            match t.finite() {
                Some(0) => {}
                Some(t) => {
                    let enough = before(t - 1) >= r;
                    let late = g
                        .neighbors(v)
                        .iter()
                        .any(|&w| self.times[w].is_exactly(t - 1));
                    let early = t >= 2 && before(t - 2) >= r;
                    if !enough || !late || early {
                        return Err(format!("vertex {v}: time {t} violates the threshold rule"));
                    }
                }
                None => {
                    if before(u32::MAX - 1) >= r {
                        return Err(format!(
                            "vertex {v}: never infected but has {r} infected neighbours"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Threshold-`r` process from `seed` run to its fixed point.
pub fn simulate(g: &Graph, seed: &VertexSet, r: usize) -> InfectionTrace {
    assert_eq!(
        seed.capacity(),
        g.n(),
        "seed width does not match the graph"
    );
    let n = g.n();
    let mut times = vec![Time::NEVER; n];
    let mut count = vec![0usize; n];
    let mut frontier: Vec<usize> = seed.iter().collect();
    for &v in &frontier {
        times[v] = Time::at(0);
    }
    if r == 0 {
        for t in times.iter_mut().filter(|t| t.is_never()) {
            *t = Time::at(1);
        }
        return InfectionTrace {
            seed: seed.clone(),
            times,
        };
    }
    let mut next = Vec::new();
    let mut round = 0u32;
    while !frontier.is_empty() {
        round += 1;
        for &v in &frontier {
            for &w in g.neighbors(v) {
                if times[w].is_never() {
                    count[w] += 1;
                    if count[w] == r {
                        times[w] = Time::at(round);
                        next.push(w);
                    }
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    InfectionTrace {
        seed: seed.clone(),
        times,
    }
}

pub fn percolate(g: &Graph, seed: &VertexSet) -> InfectionTrace {
    simulate(g, seed, THRESHOLD)
}

pub fn infection_time(trace: &InfectionTrace, v: usize) -> Result<Time, EngineError> {
    trace.time(v)
}

pub fn is_hull_set(g: &Graph, seed: &VertexSet) -> bool {
    percolate(g, seed).percolates()
}

pub fn set_percolation_time(g: &Graph, seed: &VertexSet) -> Time {
    percolate(g, seed).percolation_time()
}

/// Adds every vertex infected at time 1. The result percolates exactly
/// one round faster.
pub fn reduce_time(g: &Graph, seed: &VertexSet) -> Result<VertexSet, EngineError> {
    let trace = percolate(g, seed);
    match trace.percolation_time().finite() {
        None => Err(EngineError::NotAHullSet),
        Some(0) => Err(EngineError::AlreadyTimeZero),
        Some(_) => {
            let mut out = seed.clone();
            out.extend(trace.at_time(1));
            Ok(out)
        }
    }
}

pub fn infects_at_exact_time(g: &Graph, seed: &VertexSet, v: usize, k: u32) -> bool {
    percolate(g, seed).times[v].is_exactly(k)
}

/// Lowest-index vertex infected at exactly time `k`.
pub fn exists_vertex_at_exact_time(g: &Graph, seed: &VertexSet, k: u32) -> Option<usize> {
    percolate(g, seed).at_time(k).next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn seed(n: usize, one_based: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, one_based.iter().map(|v| v - 1))
    }

    fn times(trace: &InfectionTrace) -> Vec<Option<u32>> {
        trace.times().iter().map(|t| t.finite()).collect()
    }

    #[test]
    fn percolate_examples() {
        let p3 = gen::path(3);
        let tr = percolate(&p3, &seed(3, &[1, 3]));
        assert_eq!(times(&tr), vec![Some(0), Some(1), Some(0)]);
        assert!(tr.percolates());
        assert_eq!(tr.max_time(), Some(1));

        let c4 = gen::cycle(4);
        let tr = percolate(&c4, &seed(4, &[1, 3]));
        assert_eq!(times(&tr), vec![Some(0), Some(1), Some(0), Some(1)]);
        assert!(tr.percolates());

        let p4 = gen::path(4);
        let tr = percolate(&p4, &seed(4, &[1, 4]));
        assert_eq!(times(&tr), vec![Some(0), None, None, Some(0)]);
        assert!(!tr.percolates());
        assert_eq!(tr.percolation_time(), Time::NEVER);
    }

    #[test]
    fn infection_time_lookup() {
        let tr = percolate(&gen::path(3), &seed(3, &[1, 3]));
        assert_eq!(infection_time(&tr, 1), Ok(Time::at(1)));
        assert_eq!(infection_time(&tr, 0), Ok(Time::at(0)));
        let tr = percolate(&gen::path(4), &seed(4, &[1, 4]));
        assert_eq!(infection_time(&tr, 2), Ok(Time::NEVER));
        assert_eq!(
            infection_time(&tr, 9),
            Err(EngineError::InvalidVertex { vertex: 9, n: 4 })
        );
    }

    #[test]
    fn never_orders_above_finite_times() {
        assert!(Time::NEVER > Time::at(1_000_000));
        assert!(Time::NEVER >= Time::at(3));
        assert_eq!(Time::NEVER.to_string(), "never");
    }

    #[test]
    fn hull_set_examples() {
        assert!(is_hull_set(&gen::cycle(4), &seed(4, &[1, 3])));
        assert!(!is_hull_set(&gen::path(4), &seed(4, &[1, 4])));
        let g = gen::delay_tree(4);
        assert!(is_hull_set(&g, &VertexSet::full(g.n())));
    }

    #[test]
    fn percolation_time_examples() {
        assert_eq!(
            set_percolation_time(&gen::cycle(4), &seed(4, &[1, 3])),
            Time::at(1)
        );
        let g = gen::cycle(5);
        assert_eq!(set_percolation_time(&g, &VertexSet::full(5)), Time::at(0));
        let t7 = gen::delay_tree(3);
        assert_eq!(
            set_percolation_time(&t7, &gen::delay_tree_leaves(3)),
            Time::at(3)
        );
    }

    #[test]
    fn reduce_time_examples() {
        let c4 = gen::cycle(4);
        let reduced = reduce_time(&c4, &seed(4, &[1, 3])).unwrap();
        assert_eq!(reduced, VertexSet::full(4));
        assert_eq!(set_percolation_time(&c4, &reduced), Time::at(0));

        // Delay tree: the only time-1 vertex is p2, next to the chain end.
        let t7 = gen::delay_tree(3);
        let leaves = gen::delay_tree_leaves(3);
        let reduced = reduce_time(&t7, &leaves).unwrap();
        let added: Vec<usize> = reduced.iter().filter(|&v| !leaves.contains(v)).collect();
        assert_eq!(added, vec![gen::delay_tree_chain(3)[2]]);
        assert_eq!(set_percolation_time(&t7, &reduced), Time::at(2));

        assert_eq!(
            reduce_time(&c4, &VertexSet::full(4)),
            Err(EngineError::AlreadyTimeZero)
        );
        assert_eq!(
            reduce_time(&gen::path(4), &seed(4, &[1, 4])),
            Err(EngineError::NotAHullSet)
        );
    }

    #[test]
    fn exact_time_queries() {
        let p3 = gen::path(3);
        assert!(infects_at_exact_time(&p3, &seed(3, &[1, 3]), 1, 1));
        assert!(!infects_at_exact_time(&p3, &seed(3, &[1, 3]), 1, 2));
        assert!(!infects_at_exact_time(
            &gen::path(4),
            &seed(4, &[1, 4]),
            2,
            4
        ));

        let c4 = gen::cycle(4);
        assert_eq!(
            exists_vertex_at_exact_time(&c4, &seed(4, &[1, 3]), 1),
            Some(1)
        );
        assert_eq!(exists_vertex_at_exact_time(&c4, &seed(4, &[1, 3]), 2), None);
        assert_eq!(
            exists_vertex_at_exact_time(&c4, &VertexSet::full(4), 0),
            Some(0)
        );
    }

    #[test]
    fn general_threshold() {
        // Threshold 1 floods a connected graph in eccentricity rounds.
        let p5 = gen::path(5);
        let tr = simulate(&p5, &seed(5, &[1]), 1);
        assert_eq!(
            times(&tr),
            vec![Some(0), Some(1), Some(2), Some(3), Some(4)]
        );
        tr.check_local_rule(&p5, 1).unwrap();
        // Threshold 3 on a cycle never spreads.
        let tr = simulate(&gen::cycle(5), &seed(5, &[1, 2, 3]), 3);
        assert!(!tr.percolates());
    }
}
