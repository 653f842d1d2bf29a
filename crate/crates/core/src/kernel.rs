//! Reusable simulation buffers for the enumeration loops.
//!
//! Graphs with at most 64 vertices run on word masks: the vertices seen
//! by one or by two infected neighbours are tracked as `once`/`twice`
//! masks, so a round is a handful of ORs per newly infected vertex.
//! Larger graphs fall back to the counter-based frontier simulation.

use crate::engine::Time;
use crate::graph::Graph;
use crate::set::VertexSet;

pub(crate) struct Kernel<'g> {
    g: &'g Graph,
    imp: Imp,
}

enum Imp {
    Mask {
        adj: Vec<u64>,
        full: u64,
        /// `rounds[t]` is the set of vertices infected at exactly time `t`.
        rounds: Vec<u64>,
        infected: u64,
    },
    Count {
        times: Vec<Time>,
        count: Vec<u8>,
        frontier: Vec<usize>,
        next: Vec<usize>,
        infected: usize,
    },
}

impl<'g> Kernel<'g> {
    pub(crate) fn new(g: &'g Graph) -> Kernel<'g> {
        let imp = match g.masks() {
            Some(masks) => Imp::Mask {
                adj: masks.to_vec(),
                full: if g.n() == 64 {
                    u64::MAX
                } else {
                    (1u64 << g.n()) - 1
                },
                rounds: Vec::with_capacity(16),
                infected: 0,
            },
            None => Imp::Count {
                times: vec![Time::NEVER; g.n()],
                count: vec![0; g.n()],
                frontier: Vec::new(),
                next: Vec::new(),
                infected: 0,
            },
        };
        Kernel { g, imp }
    }

    /// Simulates `seed ∪ extra` for at most `max_round` rounds.
    pub(crate) fn run(&mut self, seed: &VertexSet, extra: &[usize], max_round: u32) {
        match &mut self.imp {
            Imp::Mask { .. } => {
                let mut mask = seed.low_mask();
                for &v in extra {
                    mask |= 1u64 << v;
                }
                self.run_mask(mask, max_round);
            }
            Imp::Count {
                times,
                count,
                frontier,
                next,
                infected,
            } => {
                times.fill(Time::NEVER);
                count.fill(0);
                frontier.clear();
                *infected = 0;
                for v in seed.iter().chain(extra.iter().copied()) {
                    if times[v].is_never() {
                        times[v] = Time::at(0);
                        frontier.push(v);
                        *infected += 1;
                    }
                }
                let mut round = 0;
                while !frontier.is_empty() && round < max_round {
                    round += 1;
                    next.clear();
                    for &v in frontier.iter() {
                        for &w in self.g.neighbors(v) {
                            if times[w].is_never() {
                                count[w] += 1;
                                if count[w] == 2 {
                                    times[w] = Time::at(round);
                                    next.push(w);
                                }
                            }
                        }
                    }
                    *infected += next.len();
                    std::mem::swap(frontier, next);
                }
            }
        }
    }

    /// Mask entry point; only valid for graphs with at most 64 vertices.
    pub(crate) fn run_mask(&mut self, seed: u64, max_round: u32) {
        let Imp::Mask {
            adj,
            full,
            rounds,
            infected,
        } = &mut self.imp
        else {
            unreachable!("mask kernel on a large graph");
        };
        rounds.clear();
        rounds.push(seed);
        *infected = seed;
        let (mut once, mut twice) = (0u64, 0u64);
        let mut frontier = seed;
        let mut round = 0;
        while round < max_round {
            round += 1;
            let mut bits = frontier;
            while bits != 0 {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                twice |= once & adj[w];
                once |= adj[w];
            }
            let new = twice & !*infected & *full;
            if new == 0 {
                break;
            }
            rounds.push(new);
            *infected |= new;
            frontier = new;
        }
    }

    /// Time of `v` in the last run; `NEVER` also covers "not within the
    /// round budget".
    pub(crate) fn time(&self, v: usize) -> Time {
        match &self.imp {
            Imp::Mask { rounds, .. } => rounds
                .iter()
                .position(|r| r >> v & 1 == 1)
                .map_or(Time::NEVER, |t| Time::at(t as u32)),
            Imp::Count { times, .. } => times[v],
        }
    }

    /// Lowest-index vertex infected at exactly time `t` in the last run.
    pub(crate) fn first_at(&self, t: u32) -> Option<usize> {
        match &self.imp {
            Imp::Mask { rounds, .. } => rounds
                .get(t as usize)
                .filter(|&&r| r != 0)
                .map(|r| r.trailing_zeros() as usize),
            Imp::Count { times, .. } => times.iter().position(|x| x.is_exactly(t)),
        }
    }

    /// Whether the last run infected every vertex.
    pub(crate) fn percolated(&self) -> bool {
        match &self.imp {
            Imp::Mask { full, infected, .. } => infected == full,
            Imp::Count {
                infected, times, ..
            } => *infected == times.len(),
        }
    }

    /// Latest round reached in the last run.
    pub(crate) fn last_round(&self) -> u32 {
        match &self.imp {
            Imp::Mask { rounds, .. } => rounds.len() as u32 - 1,
            Imp::Count { times, .. } => times.iter().filter_map(|t| t.finite()).max().unwrap_or(0),
        }
    }

    #[cfg(test)]
    pub(crate) fn is_mask(&self) -> bool {
        matches!(self.imp, Imp::Mask { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::percolate;
    use crate::gen;
    use proptest::prelude::*;

    fn force_count(g: &Graph) -> Kernel<'_> {
        Kernel {
            g,
            imp: Imp::Count {
                times: vec![Time::NEVER; g.n()],
                count: vec![0; g.n()],
                frontier: Vec::new(),
                next: Vec::new(),
                infected: 0,
            },
        }
    }

    proptest! {
        #[test]
        fn both_kernels_match_the_engine(n in 1usize..20, p in 0.05f64..0.6, graph_seed: u64, seed_bits: u64) {
            let g = gen::random_graph(n, p, graph_seed);
            let seed = VertexSet::from_vertices(n, (0..n).filter(|v| seed_bits >> v & 1 == 1));
            let trace = percolate(&g, &seed);

            let mut mask = Kernel::new(&g);
            prop_assert!(mask.is_mask());
            mask.run(&seed, &[], u32::MAX);
            let mut count = force_count(&g);
            count.run(&seed, &[], u32::MAX);
            for v in 0..n {
                prop_assert_eq!(mask.time(v), trace.times()[v]);
                prop_assert_eq!(count.time(v), trace.times()[v]);
            }
            prop_assert_eq!(mask.percolated(), trace.percolates());
            prop_assert_eq!(count.percolated(), trace.percolates());
            for t in 0..4 {
                let expected = trace.at_time(t).next();
                prop_assert_eq!(mask.first_at(t), expected);
                prop_assert_eq!(count.first_at(t), expected);
            }
        }

        #[test]
        fn round_budget_truncates(n in 2usize..16, graph_seed: u64, seed_bits: u64, budget in 0u32..5) {
            let g = gen::random_graph(n, 0.3, graph_seed);
            let seed = VertexSet::from_vertices(n, (0..n).filter(|v| seed_bits >> v & 1 == 1));
            let trace = percolate(&g, &seed);
            let mut mask = Kernel::new(&g);
            mask.run(&seed, &[], budget);
            let mut count = force_count(&g);
            count.run(&seed, &[], budget);
            for v in 0..n {
                let full = trace.times()[v];
                let expected = if full.finite().is_some_and(|t| t <= budget) { full } else { Time::NEVER };
                prop_assert_eq!(mask.time(v), expected);
                prop_assert_eq!(count.time(v), expected);
            }
        }
    }

    #[test]
    fn large_graphs_use_counters() {
        let g = gen::path(80);
        let mut k = Kernel::new(&g);
        assert!(!k.is_mask());
        let seed = VertexSet::from_vertices(80, (0..80).step_by(2).chain([79]));
        k.run(&seed, &[], u32::MAX);
        assert!(k.percolated());
        assert_eq!(k.last_round(), 1);
    }
}
