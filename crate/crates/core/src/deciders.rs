//! Polynomial deciders for `t(G) ≥ 3` (any graph, bipartite graphs) and
//! `t(G) ≥ 4` (bipartite graphs).
//!
//! Each one searches a small seed fragment `F` that, together with a
//! forced set and the vertices far from a centre `u`, pins some vertex at
//! an exact infection time. Witnesses are the least hit in the order
//! `u`, then forced-set index, then `F` by size and lexicographically.

use thiserror::Error;

use crate::engine::{percolate, Time};
use crate::families::{
    centre_partners, degree_one_set, gamma_family, pendant_components, representative_from,
    FamilyError, GammaKind,
};
use crate::graph::{ball, distance_layers, far_set, is_bipartite, is_connected, Graph};
use crate::kernel::Kernel;
use crate::parallel::Workers;
use crate::set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeciderError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    Bip3,
    Gen3,
    Bip4,
}

impl WitnessKind {
    pub fn k(self) -> u32 {
        match self {
            WitnessKind::Bip3 | WitnessKind::Gen3 => 3,
            WitnessKind::Bip4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::Bip3 => "BIP3",
            WitnessKind::Gen3 => "GEN3",
            WitnessKind::Bip4 => "BIP4",
        }
    }
}

/// What a decider found. The seed it describes is rebuilt by
/// [`Witness::base_seed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Degree-1 vertices, `N≥3(u)` and `{v, s}` infect `u` at time 3.
    Bip3 { u: usize, v: usize, s: usize },
    /// `t0 ∪ N≥3(u) ∪ f` infects `u` at time 3.
    Gen3 {
        u: usize,
        t0: VertexSet,
        f: VertexSet,
    },
    /// `t0 ∪ N≥4(u) ∪ f`, plus the degree-2 partners of `u` when `u` has
    /// degree 2, infects `x` at time 4.
    Bip4 {
        u: usize,
        gamma: GammaKind,
        t0: VertexSet,
        f: VertexSet,
        x: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("witness seed gives vertex {target} time {observed}, expected exactly {expected}")]
pub struct ReplayError {
    pub target: usize,
    pub expected: u32,
    pub observed: Time,
}

impl Witness {
    pub fn kind(&self) -> WitnessKind {
        match self {
            Witness::Bip3 { .. } => WitnessKind::Bip3,
            Witness::Gen3 { .. } => WitnessKind::Gen3,
            Witness::Bip4 { .. } => WitnessKind::Bip4,
        }
    }

    pub fn u(&self) -> usize {
        match *self {
            Witness::Bip3 { u, .. } | Witness::Gen3 { u, .. } | Witness::Bip4 { u, .. } => u,
        }
    }

    pub fn k(&self) -> u32 {
        self.kind().k()
    }

    /// The vertex whose exact time the witness certifies.
    pub fn target(&self) -> usize {
        match *self {
            Witness::Bip4 { x, .. } => x,
            _ => self.u(),
        }
    }

    /// Every vertex the witness mentions, for range checks.
    pub fn mentioned(&self) -> Vec<usize> {
        match self {
            Witness::Bip3 { u, v, s } => vec![*u, *v, *s],
            Witness::Gen3 { u, t0, f } => {
                [*u].into_iter().chain(t0.iter()).chain(f.iter()).collect()
            }
            Witness::Bip4 { u, gamma, t0, f, x } => [*u, *x]
                .into_iter()
                .chain(gamma.v())
                .chain(t0.iter())
                .chain(f.iter())
                .collect(),
        }
    }

    pub fn base_seed(&self, g: &Graph) -> VertexSet {
        match self {
            Witness::Bip3 { u, v, s } => {
                let mut seed = degree_one_set(g).union(&far_set(g, *u, 3));
                seed.insert(*v);
                seed.insert(*s);
                seed
            }
            Witness::Gen3 { u, t0, f } => t0.union(&far_set(g, *u, 3)).union(f),
            Witness::Bip4 { u, t0, f, .. } => t0
                .union(&far_set(g, *u, 4))
                .union(&centre_partners(g, *u))
                .union(f),
        }
    }

    /// Checks the exact-time condition of the witness's kind.
    pub fn replay(&self, g: &Graph) -> Result<(), ReplayError> {
        let target = self.target();
        let observed = percolate(g, &self.base_seed(g)).times()[target];
        if observed.is_exactly(self.k()) {
            Ok(())
        } else {
            Err(ReplayError {
                target,
                expected: self.k(),
                observed,
            })
        }
    }
}

/// The first subset of `pool` (by size up to `cap`, then lexicographic in
/// pool order) for which `probe` returns a value.
pub(crate) fn first_subset<T>(
    pool: &[usize],
    cap: usize,
    mut probe: impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    let n = pool.len();
    let mut chosen = Vec::with_capacity(cap);
    for size in 0..=cap.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            chosen.clear();
            chosen.extend(idx.iter().map(|&i| pool[i]));
            if let Some(hit) = probe(&chosen) {
                return Some(hit);
            }
            // Advance to the next combination of this size.
            let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

/// Decider configuration: worker count and whether `F` skips vertices
/// already in the base seed.
#[derive(Debug)]
pub struct Decider {
    workers: Workers,
    prune: bool,
}

impl Default for Decider {
    fn default() -> Self {
        Decider {
            workers: Workers::sequential(),
            prune: true,
        }
    }
}

impl Decider {
    pub fn new(threads: usize) -> Decider {
        Decider {
            workers: Workers::new(threads),
            prune: true,
        }
    }

    /// With pruning off, `F` ranges over all of `V` exactly as the
    /// characterisations state.
    pub fn with_prune(mut self, prune: bool) -> Decider {
        self.prune = prune;
        self
    }

    pub fn threads(&self) -> usize {
        self.workers.threads()
    }

    fn pool(&self, g: &Graph, u: usize, radius: usize, base: &VertexSet) -> Vec<usize> {
        if self.prune {
            let mut near = ball(g, u, radius);
            near.difference_with(base);
            near.to_vec()
        } else {
            g.vertices().collect()
        }
    }

    pub fn decide_bip3(&self, g: &Graph) -> Result<Option<Witness>, DeciderError> {
        require(g, true)?;
        if g.n() <= 2 {
            return Ok(None);
        }
        let leaves = degree_one_set(g);
        Ok(self.workers.find_first(0..g.n(), |u| {
            let base = leaves.union(&far_set(g, u, 3));
            let second = distance_layers(g, u).layer(2);
            let mut kernel = Kernel::new(g);
            for &v in g.neighbors(u) {
                for s in second.iter() {
                    kernel.run(&base, &[v, s], 3);
                    if kernel.time(u).is_exactly(3) {
                        return Some(Witness::Bip3 { u, v, s });
                    }
                }
            }
            None
        }))
    }

    pub fn decide_gen3(&self, g: &Graph) -> Result<Option<Witness>, DeciderError> {
        require(g, false)?;
        if g.n() <= 2 {
            return Ok(None);
        }
        let pendants = pendant_components(g);
        self.workers
            .find_first(0..g.n(), |u| {
                let t0 = match representative_from(g.n(), &pendants, u) {
                    Ok(t0) => t0,
                    Err(e) => return Some(Err(e.into())),
                };
                let base = t0.union(&far_set(g, u, 3));
                let pool = self.pool(g, u, 2, &base);
                let mut kernel = Kernel::new(g);
                first_subset(&pool, 4, |f| {
                    kernel.run(&base, f, 3);
                    kernel
                        .time(u)
                        .is_exactly(3)
                        .then(|| VertexSet::from_vertices(g.n(), f.iter().copied()))
                })
                .map(|f| {
                    Ok(Witness::Gen3 {
                        u,
                        t0: t0.clone(),
                        f,
                    })
                })
            })
            .transpose()
    }

    pub fn decide_bip4(&self, g: &Graph) -> Result<Option<Witness>, DeciderError> {
        require(g, true)?;
        if g.n() <= 2 {
            return Ok(None);
        }
        self.workers
            .find_first(0..g.n(), |u| {
                let family = match gamma_family(g, u) {
                    Ok(family) => family,
                    Err(e) => return Some(Err(e.into())),
                };
                let far = far_set(g, u, 4).union(&centre_partners(g, u));
                let mut kernel = Kernel::new(g);
                family.into_iter().find_map(|member| {
                    let base = member.members.union(&far);
                    let pool = self.pool(g, u, 3, &base);
                    first_subset(&pool, 8, |f| {
                        kernel.run(&base, f, 4);
                        kernel
                            .first_at(4)
                            .map(|x| (x, VertexSet::from_vertices(g.n(), f.iter().copied())))
                    })
                    .map(|(x, f)| {
                        Ok(Witness::Bip4 {
                            u,
                            gamma: member.kind,
                            t0: member.members,
                            f,
                            x,
                        })
                    })
                })
            })
            .transpose()
    }
}

fn require(g: &Graph, bipartite: bool) -> Result<(), DeciderError> {
    if !is_connected(g) {
        return Err(DeciderError::NotConnected);
    }
    if bipartite && is_bipartite(g).is_none() {
        return Err(DeciderError::NotBipartite);
    }
    Ok(())
}

pub fn decide_bip3(g: &Graph) -> Result<Option<Witness>, DeciderError> {
    Decider::default().decide_bip3(g)
}

pub fn decide_gen3(g: &Graph) -> Result<Option<Witness>, DeciderError> {
    Decider::default().decide_gen3(g)
}

pub fn decide_bip4(g: &Graph) -> Result<Option<Witness>, DeciderError> {
    Decider::default().decide_bip4(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracle::brute_force_t;

    #[test]
    fn subsets_come_by_size_then_lexicographically() {
        let mut seen = Vec::new();
        let hit: Option<()> = first_subset(&[1, 2, 3], 2, |f| {
            seen.push(f.to_vec());
            None
        });
        assert!(hit.is_none());
        assert_eq!(
            seen,
            vec![
                vec![],
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(
            first_subset(&[4, 5], 5, |f| (f.len() == 2).then(|| f.to_vec())),
            Some(vec![4, 5])
        );
    }

    #[test]
    fn bip3_examples() {
        let w = decide_bip3(&gen::delay_tree(3)).unwrap().unwrap();
        assert!(w.replay(&gen::delay_tree(3)).is_ok());
        assert_eq!(decide_bip3(&gen::cycle(6)).unwrap(), None);
        assert_eq!(decide_bip3(&gen::path(4)).unwrap(), None);
        assert_eq!(decide_bip3(&gen::cycle(5)), Err(DeciderError::NotBipartite));
    }

    #[test]
    fn gen3_examples() {
        let g = gen::delay_tree(3);
        let w = decide_gen3(&g).unwrap().unwrap();
        assert_eq!(w.kind(), WitnessKind::Gen3);
        assert!(w.replay(&g).is_ok());
        assert_eq!(decide_gen3(&gen::cycle(5)).unwrap(), None);
        assert_eq!(decide_gen3(&gen::star(3)).unwrap(), None);
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(decide_gen3(&split), Err(DeciderError::NotConnected));
    }

    #[test]
    fn bip4_examples() {
        let g = gen::delay_tree(4);
        let w = decide_bip4(&g).unwrap().unwrap();
        assert!(w.replay(&g).is_ok());
        assert_eq!(decide_bip4(&gen::delay_tree(3)).unwrap(), None);
        assert_eq!(decide_bip4(&gen::cycle(6)).unwrap(), None);
    }

    #[test]
    fn centre_on_a_degree_two_pair_keeps_its_partner() {
        // 3 and 4 form an adjacent degree-2 pair, so every hull set holds
        // one of them. Leaving both out lets u = 3 fake a time-4 vertex.
        let edges = [
            (0, 1),
            (0, 3),
            (0, 6),
            (0, 8),
            (1, 2),
            (1, 4),
            (1, 7),
            (2, 6),
            (3, 4),
            (5, 6),
            (6, 7),
        ];
        let g = Graph::from_edges(9, edges).unwrap();
        assert_eq!(crate::oracle::brute_force_t(&g, 20).unwrap(), 3);
        assert_eq!(decide_bip4(&g).unwrap(), None);
    }

    #[test]
    fn tiny_graphs_are_rejected_early() {
        assert_eq!(decide_gen3(&Graph::empty(1)).unwrap(), None);
        assert_eq!(decide_bip3(&gen::path(2)).unwrap(), None);
        assert_eq!(decide_bip4(&gen::path(2)).unwrap(), None);
    }

    #[test]
    fn agrees_with_the_oracle_on_small_trees_and_cycles() {
        for g in [
            gen::path(5),
            gen::path(7),
            gen::star(4),
            gen::cycle(8),
            gen::delay_tree(2),
        ] {
            let t = brute_force_t(&g, 20).unwrap();
            assert_eq!(decide_gen3(&g).unwrap().is_some(), t >= 3, "{g:?}");
            assert_eq!(decide_bip3(&g).unwrap().is_some(), t >= 3, "{g:?}");
            assert_eq!(decide_bip4(&g).unwrap().is_some(), t >= 4, "{g:?}");
        }
    }

    #[test]
    fn threads_do_not_change_witnesses() {
        for seed in 0..20 {
            let g = gen::random_connected_bipartite(9, 0.15, seed);
            let one = Decider::new(1);
            let four = Decider::new(4);
            assert_eq!(one.decide_bip4(&g), four.decide_bip4(&g));
            assert_eq!(one.decide_gen3(&g), four.decide_gen3(&g));
        }
    }
}
