//! Forced seed ingredients.
//!
//! Every hull set must meet every co-convex set (a set whose members each
//! have at most one neighbour outside it). The families here collect the
//! co-convex pieces the deciders quantify over: degree-1 vertices, the
//! pendant components hanging off a separator, and degree-2 induced paths
//! near a vertex `u`.

use std::fmt;

use thiserror::Error;

use crate::graph::{components_excluding, distance_layers, is_bipartite, Graph};
use crate::set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("representative set meets the pendant component {component:?} of separator {separator} {hits} times")]
    ValidityViolation {
        separator: usize,
        component: Vec<usize>,
        hits: usize,
    },
}

fn check(g: &Graph, v: usize) -> Result<(), FamilyError> {
    if v < g.n() {
        Ok(())
    } else {
        Err(FamilyError::InvalidVertex {
            vertex: v,
            n: g.n(),
        })
    }
}

pub fn degree_one_set(g: &Graph) -> VertexSet {
    VertexSet::from_vertices(g.n(), g.vertices().filter(|&v| g.degree(v) == 1))
}

/// Degree-2 neighbours of `u` when `u` itself has degree 2. A seed that
/// leaves `u` out must contain these, since `{u, y}` is co-convex for each
/// one; the time-4 search adds them to every forced set.
pub fn centre_partners(g: &Graph, u: usize) -> VertexSet {
    let partners = g.neighbors(u).iter().copied().filter(|&y| g.degree(y) == 2);
    if g.degree(u) == 2 {
        VertexSet::from_vertices(g.n(), partners)
    } else {
        VertexSet::new(g.n())
    }
}

/// A component `H` of `G - separator` with `H ⊆ N(separator)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendantComponent {
    pub separator: usize,
    pub members: VertexSet,
}

/// All pendant components of `g`, by separator then by minimum member.
/// Each one is co-convex: its members' only outside neighbour is the
/// separator.
pub fn pendant_components(g: &Graph) -> Vec<PendantComponent> {
    let mut out = Vec::new();
    for v in g.vertices() {
        let around = VertexSet::from_vertices(g.n(), g.neighbors(v).iter().copied());
        for h in components_excluding(g, v) {
            if h.is_subset(&around) {
                out.push(PendantComponent {
                    separator: v,
                    members: h,
                });
            }
        }
    }
    out
}

/// The deterministic member of `𝒯₀ᵘ`: the minimum vertex of every
/// pendant component that avoids `u`.
pub fn representative_t0u(g: &Graph, u: usize) -> Result<VertexSet, FamilyError> {
    check(g, u)?;
    representative_from(g.n(), &pendant_components(g), u)
}

pub(crate) fn representative_from(
    n: usize,
    pendants: &[PendantComponent],
    u: usize,
) -> Result<VertexSet, FamilyError> {
    let relevant: Vec<&PendantComponent> =
        pendants.iter().filter(|h| !h.members.contains(u)).collect();
    let mut out = VertexSet::new(n);
    for h in &relevant {
        out.insert(h.members.min().expect("components are non-empty"));
    }
    for h in &relevant {
        let mut hit = h.members.clone();
        hit.intersect_with(&out);
        if hit.len() != 1 {
            return Err(FamilyError::ValidityViolation {
                separator: h.separator,
                component: h.members.to_vec(),
                hits: hit.len(),
            });
        }
    }
    Ok(out)
}

/// Degree-2 induced paths `v-x-y` avoiding `u`: `p` holds the `x`s
/// (adjacent to `v`), `q` the `y`s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpqPartition {
    pub v: usize,
    pub m: VertexSet,
    pub p: VertexSet,
    pub q: VertexSet,
    /// `(x, y)` for every `x` in `p`, ascending in `x`.
    pub pairs: Vec<(usize, usize)>,
}

impl MpqPartition {
    /// The unique degree-2 partner of `x ∈ P`.
    pub fn partner(&self, x: usize) -> Option<usize> {
        self.pairs.iter().find(|&&(a, _)| a == x).map(|&(_, y)| y)
    }
}

/// `M`, `P`, `Q` for the pair `(u, v)`. All three are empty unless
/// `v ∈ N[u]`.
pub fn mpq(g: &Graph, u: usize, v: usize) -> Result<MpqPartition, FamilyError> {
    check(g, u)?;
    check(g, v)?;
    let n = g.n();
    let mut part = MpqPartition {
        v,
        m: VertexSet::new(n),
        p: VertexSet::new(n),
        q: VertexSet::new(n),
        pairs: Vec::new(),
    };
    if v != u && !g.has_edge(u, v) {
        return Ok(part);
    }
    for &x in g.neighbors(v) {
        if x == u || g.degree(x) != 2 {
            continue;
        }
        let y = g
            .neighbors(x)
            .iter()
            .copied()
            .find(|&w| w != v)
            .expect("degree two");
        if y == u || g.degree(y) != 2 || g.has_edge(v, y) {
            continue;
        }
        part.p.insert(x);
        part.q.insert(y);
        part.pairs.push((x, y));
    }
    part.m = part.p.union(&part.q);
    Ok(part)
}

/// Which member of `Γ₀ᵘ` a set is. `i` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GammaKind {
    Prime,
    Vertex { v: usize },
    Pair { v: usize, i: usize },
}

impl GammaKind {
    pub fn v(&self) -> Option<usize> {
        match *self {
            GammaKind::Prime => None,
            GammaKind::Vertex { v } | GammaKind::Pair { v, .. } => Some(v),
        }
    }

    pub fn i(&self) -> Option<usize> {
        match *self {
            GammaKind::Pair { i, .. } => Some(i),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GammaKind::Prime => "T0'",
            GammaKind::Vertex { .. } => "T0^v",
            GammaKind::Pair { .. } => "T0^v,i",
        }
    }
}

impl fmt::Display for GammaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GammaKind::Prime => f.write_str("T0'"),
            GammaKind::Vertex { v } => write!(f, "T0^{}", v + 1),
            GammaKind::Pair { v, i } => write!(f, "T0^{},{}", v + 1, i),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMember {
    pub kind: GammaKind,
    pub members: VertexSet,
}

/// The candidate forced sets for the bipartite time-4 characterisation:
/// `T0'`, then `T0^v` for each `v ∈ N(u)`, then `T0^{v,i}` for each
/// `v ∈ N(u)` and each `i` in `1..=|P_v|`.
pub fn gamma_family(g: &Graph, u: usize) -> Result<Vec<GammaMember>, FamilyError> {
    check(g, u)?;
    if is_bipartite(g).is_none() {
        return Err(FamilyError::NotBipartite);
    }
    let second = distance_layers(g, u).layer(2);
    let leaves = degree_one_set(g);

    let mut closed: Vec<usize> = g.neighbors(u).to_vec();
    closed.push(u);
    closed.sort_unstable();
    let parts: Vec<MpqPartition> = closed
        .iter()
        .map(|&v| mpq(g, u, v))
        .collect::<Result<_, _>>()?;

    let mut out = Vec::with_capacity(1 + 2 * g.degree(u));

    let mut prime = leaves.clone();
    for part in &parts {
        let mut near = part.m.clone();
        near.intersect_with(&second);
        prime.union_with(&near);
    }
    out.push(GammaMember {
        kind: GammaKind::Prime,
        members: prime,
    });

    // For each v ∈ N(u): the N2(u) parts of every other M_{v'}, minus M_v.
    let shared: Vec<(usize, &MpqPartition, VertexSet)> = parts
        .iter()
        .filter(|part| part.v != u)
        .map(|part| {
            let mut acc = leaves.clone();
            for other in parts.iter().filter(|o| o.v != part.v) {
                let mut piece = other.m.clone();
                piece.difference_with(&part.m);
                piece.intersect_with(&second);
                acc.union_with(&piece);
            }
            (part.v, part, acc)
        })
        .collect();

    for (v, part, acc) in &shared {
        out.push(GammaMember {
            kind: GammaKind::Vertex { v: *v },
            members: acc.union(&part.q),
        });
    }
    for (v, part, acc) in &shared {
        for (idx, &(x, y)) in part.pairs.iter().enumerate() {
            let mut members = acc.union(&part.q);
            if !acc.contains(y) {
                members.remove(y);
            }
            members.insert(x);
            out.push(GammaMember {
                kind: GammaKind::Pair { v: *v, i: idx + 1 },
                members,
            });
        }
    }
    debug_assert_eq!(
        out.len(),
        1 + shared
            .iter()
            .map(|(_, p, _)| 1 + p.pairs.len())
            .sum::<usize>()
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::far_set;

    fn set(n: usize, one_based: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, one_based.iter().map(|v| v - 1))
    }

    #[test]
    fn centre_partner_examples() {
        let c6 = gen::cycle(6);
        assert_eq!(centre_partners(&c6, 0), set(6, &[2, 6]));
        assert!(centre_partners(&gen::star(3), 0).is_empty());
        assert!(centre_partners(&gen::path(3), 0).is_empty());
        assert_eq!(centre_partners(&gen::path(4), 1), set(4, &[3]));
    }

    #[test]
    fn degree_one_examples() {
        assert_eq!(degree_one_set(&gen::star(3)), set(4, &[2, 3, 4]));
        assert!(degree_one_set(&gen::cycle(4)).is_empty());
        assert_eq!(degree_one_set(&gen::path(4)), set(4, &[1, 4]));
    }

    #[test]
    fn representative_examples() {
        assert_eq!(representative_t0u(&gen::path(3), 0).unwrap(), set(3, &[3]));
        assert_eq!(
            representative_t0u(&gen::path(5), 2).unwrap(),
            set(5, &[1, 5])
        );
        assert!(representative_t0u(&gen::cycle(4), 0).unwrap().is_empty());
    }

    #[test]
    fn representative_counts_universal_u_as_a_separator() {
        // In K3 every other vertex is a neighbour of u, so G-u itself is a
        // pendant component of u.
        assert_eq!(
            representative_t0u(&gen::complete(3), 0).unwrap(),
            set(3, &[2])
        );
    }

    #[test]
    fn mpq_on_a_path() {
        // u - v - x - y - z: x and y have degree 2.
        let g = gen::path(5);
        let part = mpq(&g, 0, 1).unwrap();
        assert_eq!(part.p, set(5, &[3]));
        assert_eq!(part.q, set(5, &[4]));
        assert_eq!(part.partner(2), Some(3));
    }

    #[test]
    fn mpq_far_vertices_are_empty() {
        let g = gen::path(5);
        let part = mpq(&g, 0, 3).unwrap();
        assert!(part.m.is_empty());
    }

    #[test]
    fn mpq_on_a_star() {
        let g = gen::star(3);
        assert!(mpq(&g, 0, 1).unwrap().m.is_empty());
    }

    #[test]
    fn gamma_on_a_star() {
        let g = gen::star(3);
        let family = gamma_family(&g, 0).unwrap();
        let kinds: Vec<GammaKind> = family.iter().map(|m| m.kind).collect();
        assert_eq!(
            kinds,
            vec![
                GammaKind::Prime,
                GammaKind::Vertex { v: 1 },
                GammaKind::Vertex { v: 2 },
                GammaKind::Vertex { v: 3 }
            ]
        );
        for member in family {
            assert_eq!(member.members, set(4, &[2, 3, 4]));
        }
    }

    #[test]
    fn gamma_rejects_odd_cycles() {
        assert_eq!(
            gamma_family(&gen::cycle(5), 0),
            Err(FamilyError::NotBipartite)
        );
    }

    fn random_bipartite() -> impl Iterator<Item = Graph> {
        (0..150u64).map(|s| {
            gen::random_connected_bipartite(5 + (s % 10) as usize, 0.05 * (s % 5) as f64, s)
        })
    }

    fn missed_pairs(g: &Graph, u: usize, members: &VertexSet) -> Vec<(usize, usize)> {
        let hit = members.union(&far_set(g, u, 4));
        g.edges()
            .filter(|&(x, y)| x != u && y != u && g.degree(x) == 2 && g.degree(y) == 2)
            .filter(|&(x, y)| !hit.contains(x) && !hit.contains(y))
            .collect()
    }

    #[test]
    fn prime_member_hits_every_degree_two_pair_away_from_u() {
        for g in random_bipartite() {
            for u in g.vertices() {
                let prime = &gamma_family(&g, u).unwrap()[0];
                assert_eq!(missed_pairs(&g, u, &prime.members), vec![], "{g:?} u={u}");
            }
        }
    }

    #[test]
    fn vertex_member_can_miss_a_pair_shared_with_m_u() {
        // Path 4-1-2-3-5 rooted at the leaf 4: vertex 2 lies in both
        // M_u and M_1, so the difference drops it and {1, 2} goes unhit.
        let g = Graph::from_edges(5, [(0, 1), (0, 3), (1, 2), (2, 4)]).unwrap();
        let family = gamma_family(&g, 3).unwrap();
        let t0v = family
            .iter()
            .find(|m| m.kind == GammaKind::Vertex { v: 0 })
            .unwrap();
        assert_eq!(t0v.members, set(5, &[3, 4, 5]));
        assert_eq!(missed_pairs(&g, 3, &t0v.members), vec![(0, 1)]);
    }

    #[test]
    fn gamma_stays_linear_in_m() {
        for g in random_bipartite() {
            for u in g.vertices() {
                let count = gamma_family(&g, u).unwrap().len();
                assert!(
                    count <= 1 + 2 * g.degree(u) + g.m(),
                    "{g:?} u={u}: {count} members"
                );
            }
        }
    }

    #[test]
    fn forced_sets_sit_inside_hull_sets() {
        for g in random_bipartite().filter(|g| g.n() <= 11) {
            let hulls: Vec<u64> = crate::oracle::percolating_masks(&g, 20)
                .unwrap()
                .into_iter()
                .map(|(m, _)| m)
                .collect();
            let inside = |s: &VertexSet| {
                let mask = s.iter().fold(0u64, |acc, v| acc | 1 << v);
                hulls.iter().any(|&h| h & mask == mask)
            };
            for u in g.vertices() {
                assert!(
                    inside(&representative_t0u(&g, u).unwrap()),
                    "{g:?} representative of {u}"
                );
                for m in gamma_family(&g, u).unwrap() {
                    assert!(inside(&m.members), "{g:?} u={u} {}", m.kind);
                }
            }
        }
    }

    #[test]
    fn representative_holds_the_leaves() {
        for s in 0..100u64 {
            let g = gen::random_connected_graph(4 + (s % 12) as usize, 0.1, s);
            for u in g.vertices() {
                let mut leaves = degree_one_set(&g);
                leaves.remove(u);
                assert!(leaves.is_subset(&representative_t0u(&g, u).unwrap()));
            }
        }
    }
}
