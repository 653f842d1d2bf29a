//! Growing a decider witness into a full hull set that keeps the slow
//! vertex slow, and searching small certificates directly.

use thiserror::Error;

use crate::deciders::{first_subset, ReplayError, Witness, WitnessKind};
use crate::engine::{percolate, InfectionTrace, Time};
use crate::graph::{
    ball, components_within, distance_layers, far_set, is_bipartite, is_connected, Graph,
};
use crate::kernel::Kernel;
use crate::set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("witness does not replay: {0}")]
    WitnessReplayFailed(#[from] ReplayError),
    #[error("expected a {expected} witness, got {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("witness mentions vertex {vertex}, out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("internal assertion failed: {0}")]
    InternalAssertionFailed(String),
}

fn internal(msg: String) -> ConstructError {
    ConstructError::InternalAssertionFailed(msg)
}

fn prepare(
    g: &Graph,
    w: &Witness,
    kind: WitnessKind,
    bipartite: bool,
) -> Result<VertexSet, ConstructError> {
    if w.kind() != kind {
        return Err(ConstructError::WrongKind {
            expected: kind.name(),
            found: w.kind().name(),
        });
    }
    if let Some(&vertex) = w.mentioned().iter().find(|&&v| v >= g.n()) {
        return Err(ConstructError::InvalidVertex { vertex, n: g.n() });
    }
    if !is_connected(g) {
        return Err(ConstructError::NotConnected);
    }
    if bipartite && is_bipartite(g).is_none() {
        return Err(ConstructError::NotBipartite);
    }
    w.replay(g)?;
    Ok(w.base_seed(g))
}

fn at_least(t: Time, k: u32) -> bool {
    t.finite().is_some_and(|t| t >= k)
}

fn uninfected(trace: &InfectionTrace) -> VertexSet {
    let n = trace.times().len();
    VertexSet::from_vertices(n, (0..n).filter(|&v| trace.times()[v].is_never()))
}

/// Uninfected, and no infected neighbour reached time 2 or later.
fn quiet(g: &Graph, trace: &InfectionTrace, y: usize) -> bool {
    let times = trace.times();
    times[y].is_never()
        && g.neighbors(y)
            .iter()
            .all(|&z| times[z].is_never() || times[z] < Time::at(2))
}

fn finish(g: &Graph, seed: VertexSet, k: u32) -> Result<VertexSet, ConstructError> {
    let t = percolate(g, &seed).percolation_time();
    if at_least(t, k) {
        Ok(seed)
    } else {
        Err(internal(format!("final hull set has time {t}, below {k}")))
    }
}

/// Adds the least uninfected vertex at distance 2 from `u` until the seed
/// percolates.
pub fn extend_bip3(g: &Graph, w: &Witness) -> Result<VertexSet, ConstructError> {
    let mut seed = prepare(g, w, WitnessKind::Bip3, true)?;
    let u = w.u();
    let second = distance_layers(g, u).layer(2);
    for _ in 0..=second.len() {
        let trace = percolate(g, &seed);
        if trace.percolates() {
            return finish(g, seed, 3);
        }
        let Some(q) = second.iter().find(|&q| trace.times()[q].is_never()) else {
            return Err(internal(format!(
                "seed does not percolate but every vertex at distance 2 from {u} is infected"
            )));
        };
        seed.insert(q);
    }
    Err(internal("distance-2 additions did not terminate".into()))
}

/// Grows the seed one vertex per step while keeping a current target at
/// time at least 3. A quiet distance-2 vertex is absorbed directly; when
/// none exists, a vertex of the uninfected component is seeded and the
/// target moves to a component vertex with a different outside neighbour.
pub fn extend_gen3(g: &Graph, w: &Witness) -> Result<VertexSet, ConstructError> {
    let mut seed = prepare(g, w, WitnessKind::Gen3, false)?;
    let mut target = w.u();
    for _ in 0..=g.n() {
        let trace = percolate(g, &seed);
        let t = trace.times()[target];
        if !at_least(t, 3) {
            return Err(internal(format!("target {target} has time {t}, below 3")));
        }
        if trace.percolates() {
            return finish(g, seed, 3);
        }
        let second = distance_layers(g, target).layer(2);
        if let Some(y) = second.iter().find(|&y| quiet(g, &trace, y)) {
            seed.insert(y);
            seed.union_with(&far_set(g, target, 3));
            continue;
        }

        let Some(y) = second.iter().find(|&y| trace.times()[y].is_never()) else {
            return Err(internal(format!(
                "no uninfected vertex at distance 2 from target {target}"
            )));
        };
        let open = uninfected(&trace);
        let comp = components_within(g, &open)
            .into_iter()
            .find(|c| c.contains(y))
            .expect("y is uninfected");
        let outside = |v: usize| -> Vec<usize> {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&x| !comp.contains(x))
                .collect()
        };
        let z = match outside(y).as_slice() {
            &[z] => z,
            other => {
                return Err(internal(format!(
                    "vertex {y} has {} outside neighbours",
                    other.len()
                )))
            }
        };
        let Some(moved) = comp.iter().find(|&c| outside(c).iter().any(|&x| x != z)) else {
            return Err(internal(format!(
                "every vertex of the component of {y} hangs off {z} alone"
            )));
        };
        seed.insert(y);
        seed.union_with(&far_set(g, moved, 3));
        target = moved;
    }
    Err(internal("extension did not terminate".into()))
}

/// Phases around the time-4 vertex `x`: absorb quiet vertices at
/// distance 2, then at distance 3, then every uninfected vertex at
/// distance 4 or more. Finally seed one vertex of an uninfected component
/// so that a vertex two steps away inside it is delayed, and flood the
/// remaining components from the matching layers.
pub fn extend_bip4(g: &Graph, w: &Witness) -> Result<VertexSet, ConstructError> {
    let mut seed = prepare(g, w, WitnessKind::Bip4, true)?;
    let x = w.target();
    let layers = distance_layers(g, x);
    let (n1, n2, n3) = (layers.layer(1), layers.layer(2), layers.layer(3));

    for _ in 0..=g.n() {
        let trace = percolate(g, &seed);
        if trace.percolates() {
            return finish(g, seed, 4);
        }
        let quiet_in = |layer: &VertexSet| layer.iter().find(|&y| quiet(g, &trace, y));
        if let Some(y) = quiet_in(&n2).or_else(|| quiet_in(&n3)) {
            seed.insert(y);
            let t = percolate(g, &seed).times()[x];
            if !t.is_exactly(4) {
                return Err(internal(format!("adding {y} moved vertex {x} to time {t}")));
            }
            continue;
        }

        // Vertices four or more steps from x cannot speed it up. Seeding
        // them first leaves only components whose single infected
        // neighbours were reached at time 2 or later.
        let open = uninfected(&trace);
        let mut remote = open.clone();
        remote.intersect_with(&far_set(g, x, 4));
        if !remote.is_empty() {
            seed.union_with(&remote);
            let t = percolate(g, &seed).times()[x];
            if !t.is_exactly(4) {
                return Err(internal(format!(
                    "seeding {:?} moved vertex {x} to time {t}",
                    remote.to_vec()
                )));
            }
            continue;
        }

        let comp = components_within(g, &open)
            .into_iter()
            .min_by_key(|c| c.min())
            .expect("seed does not percolate");
        let near = n1.union(&n2).union(&n3);
        let Some((y, moved)) = distance_two_pair(g, &comp, &near) else {
            return Err(internal(format!(
                "component {:?} has no suitable distance-2 pair",
                comp.to_vec()
            )));
        };
        let mut rest = open.clone();
        rest.difference_with(&comp);
        rest.intersect_with(&if n2.contains(moved) {
            n2.clone()
        } else {
            n1.union(&n3)
        });
        seed.insert(y);
        seed.union_with(&rest);

        let trace = percolate(g, &seed);
        let t = trace.times()[moved];
        if !trace.percolates() || !at_least(t, 4) {
            return Err(internal(format!(
                "after seeding {y} the set percolates: {}, and vertex {moved} has time {t}",
                trace.percolates()
            )));
        }
        return Ok(seed);
    }
    Err(internal("extension did not terminate".into()))
}

/// The least `(y, y')` inside `comp` with a common neighbour in `comp`,
/// preferring pairs whose `y'` lies in `near`.
fn distance_two_pair(g: &Graph, comp: &VertexSet, near: &VertexSet) -> Option<(usize, usize)> {
    let pairs = || {
        comp.iter().flat_map(move |y| {
            comp.iter()
                .filter(move |&y2| {
                    y2 != y
                        && !g.has_edge(y, y2)
                        && g.neighbors(y)
                            .iter()
                            .any(|&c| comp.contains(c) && g.has_edge(c, y2))
                })
                .map(move |y2| (y, y2))
        })
    };
    pairs()
        .find(|&(_, y2)| near.contains(y2))
        .or_else(|| pairs().next())
}

/// The least `F ⊆ N≤k(target)` with `|F| ≤ cap` (by size, then
/// lexicographic) under which `target` is infected at exactly time `k`.
/// Only the seed within distance `k` can influence that, so the pool
/// restriction loses nothing.
///
/// Panics if `target` is not a vertex of `g`.
pub fn find_small_certificate(g: &Graph, target: usize, k: u32, cap: usize) -> Option<VertexSet> {
    assert!(target < g.n(), "target {target} out of range");
    let pool = ball(g, target, k as usize).to_vec();
    let empty = VertexSet::new(g.n());
    let mut kernel = Kernel::new(g);
    first_subset(&pool, cap, |f| {
        kernel.run(&empty, f, k);
        kernel
            .time(target)
            .is_exactly(k)
            .then(|| VertexSet::from_vertices(g.n(), f.iter().copied()))
    })
}
