//! The bipartite 3-SAT gadget: a satisfiable formula yields a hull set
//! with percolation time `k`, an unsatisfiable one caps every hull set at 4.
//!
//! Each literal slot gets a square `uA-uB-ℓ-w` whose `w` and `ℓ` each
//! carry a delay tree (a chain of three with pendant leaves) that infects
//! them at time 3 on their own. Seeding `uA` for a true literal pulls its
//! `w` down to time 1. A conflict vertex `y` joins the `w`s of each
//! complementary literal pair, so all of them reach time exactly 4 when
//! the assignment is consistent, and `z` above them reaches time 5.

use std::fmt;

use thiserror::Error;

use crate::engine::{percolate, Time};
use crate::graph::{is_bipartite, Graph};
use crate::set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause {clause} has {found} literals, expected 3")]
    ClauseWidth { clause: usize, found: usize },
    #[error("literal {literal} outside variables 1..={num_vars}")]
    BadLiteral { literal: i64, num_vars: usize },
    #[error("header announces {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
}

/// A 3-CNF formula. Literals are signed 1-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<CnfFormula, CnfError> {
        for clause in &clauses {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(CnfError::BadLiteral {
                        literal: lit as i64,
                        num_vars,
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Slots of `clause` whose literal is true.
    pub fn true_slots(&self, clause: usize, a: &Assignment) -> Vec<usize> {
        (0..3)
            .filter(|&j| a.holds(self.clauses[clause][j]))
            .collect()
    }

    /// The first clause with no true literal, if any.
    pub fn first_unsatisfied(&self, a: &Assignment) -> Option<usize> {
        (0..self.clauses.len()).find(|&i| self.true_slots(i, a).is_empty())
    }
}

/// DIMACS CNF: `c` comments, a `p cnf <vars> <clauses>` header, then three
/// literals and a terminating `0` per clause. A `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            if header.is_some() {
                return Err(CnfError::Parse {
                    line,
                    msg: "second problem line".into(),
                });
            }
            header = Some(parsed.ok_or_else(|| CnfError::Parse {
                line,
                msg: format!("bad problem line {trimmed:?}"),
            })?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(CnfError::Parse {
                line,
                msg: "clause before the problem line".into(),
            });
        };
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| CnfError::Parse {
                line,
                msg: format!("bad literal {token:?}"),
            })?;
            if lit == 0 {
                let clause: [i32; 3] =
                    current
                        .as_slice()
                        .try_into()
                        .map_err(|_| CnfError::ClauseWidth {
                            clause: clauses.len() + 1,
                            found: current.len(),
                        })?;
                clauses.push(clause);
                current.clear();
            } else if lit.unsigned_abs() as usize > num_vars {
                return Err(CnfError::BadLiteral {
                    literal: lit,
                    num_vars,
                });
            } else {
                current.push(lit as i32);
            }
        }
    }
    let Some((num_vars, expected)) = header else {
        return Err(CnfError::Parse {
            line: 0,
            msg: "missing problem line".into(),
        });
    };
    if !current.is_empty() {
        return Err(CnfError::ClauseWidth {
            clause: clauses.len() + 1,
            found: current.len(),
        });
    }
    if clauses.len() != expected {
        return Err(CnfError::ClauseCount {
            expected,
            found: clauses.len(),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

/// Truth values by variable; variables never mentioned are false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    /// From signed literals, each setting its variable to its sign.
    pub fn from_literals(num_vars: usize, literals: &[i32]) -> Result<Assignment, CnfError> {
        let mut values = vec![false; num_vars];
        for &lit in literals {
            if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                return Err(CnfError::BadLiteral {
                    literal: lit as i64,
                    num_vars,
                });
            }
            values[lit.unsigned_abs() as usize - 1] = lit > 0;
        }
        Ok(Assignment { values })
    }

    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn holds(&self, lit: i32) -> bool {
        self.value(lit.unsigned_abs() as usize) == (lit > 0)
    }
}

/// One `±var` per line; blank lines and `c` comments are skipped.
pub fn parse_assignment(text: &str, num_vars: usize) -> Result<Assignment, CnfError> {
    let mut literals = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let lit: i32 = trimmed
            .trim_start_matches('+')
            .parse()
            .map_err(|_| CnfError::Parse {
                line: idx + 1,
                msg: format!("bad literal {trimmed:?}"),
            })?;
        literals.push(lit);
    }
    Assignment::from_literals(num_vars, &literals)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("k must be at least 5, got {0}")]
    BadK(usize),
    #[error("assignment leaves clause {0} unsatisfied")]
    NotSatisfying(usize),
    #[error("formula has no complementary literal pair, so z is cut off from the gadgets")]
    EmptyY,
}

/// Vertex ids of one literal slot. `p`/`r` are the chains below `w`/`ℓ`
/// (`p[2]`, `r[2]` are the chain ends) and `q`/`s` the pendant leaves on
/// the host and the first two chain vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotRoles {
    pub ua: usize,
    pub ub: usize,
    pub w: usize,
    pub l: usize,
    pub p: [usize; 3],
    pub q: [usize; 3],
    pub r: [usize; 3],
    pub s: [usize; 3],
}

const SLOT_SIZE: usize = 16;

impl SlotRoles {
    fn at(base: usize) -> SlotRoles {
        let v = |i: usize| base + i;
        SlotRoles {
            ua: v(0),
            ub: v(1),
            w: v(2),
            l: v(3),
            p: [v(4), v(5), v(6)],
            q: [v(7), v(8), v(9)],
            r: [v(10), v(11), v(12)],
            s: [v(13), v(14), v(15)],
        }
    }

    /// Degree-1 vertices of both delay trees.
    pub fn leaves(&self) -> [usize; 8] {
        let [q0, q1, q2] = self.q;
        let [s0, s1, s2] = self.s;
        [q0, q1, q2, self.p[2], s0, s1, s2, self.r[2]]
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = vec![
            (self.ua, self.ub),
            (self.ua, self.w),
            (self.ub, self.l),
            (self.l, self.w),
        ];
        for (host, chain, pend) in [(self.w, self.p, self.q), (self.l, self.r, self.s)] {
            let path = [host, chain[0], chain[1], chain[2]];
            for i in 0..3 {
                e.push((path[i], path[i + 1]));
                e.push((path[i], pend[i]));
            }
        }
        e
    }
}

/// A conflict vertex between two complementary literal slots, each given
/// as 0-based `(clause, slot)` with `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConflictVertex {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMap {
    pub k: usize,
    pub clauses: Vec<[SlotRoles; 3]>,
    pub y: Vec<ConflictVertex>,
    pub z: usize,
    pub z_prime: usize,
    /// `(path vertex, its leaf)`, starting next to `z`.
    pub path: Vec<(usize, usize)>,
    /// The delay-tree leaves of every slot.
    pub t: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionOptions {
    /// Also add conflict vertices for complementary literals in the same
    /// clause.
    pub intra_clause: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions { intra_clause: true }
    }
}

pub fn build_reduction(cnf: &CnfFormula, k: usize) -> Result<(Graph, GadgetMap), ReductionError> {
    build_reduction_with(cnf, k, ReductionOptions::default())
}

/// Vertices are numbered clause by clause and slot by slot, then `Y`
/// by key, then `z`, `z'`, then the path vertices each followed by its
/// leaf.
pub fn build_reduction_with(
    cnf: &CnfFormula,
    k: usize,
    opts: ReductionOptions,
) -> Result<(Graph, GadgetMap), ReductionError> {
    if k < 5 {
        return Err(ReductionError::BadK(k));
    }
    let mut edges = Vec::new();
    let clauses: Vec<[SlotRoles; 3]> = (0..cnf.clauses.len())
        .map(|i| std::array::from_fn(|j| SlotRoles::at((3 * i + j) * SLOT_SIZE)))
        .collect();
    for slots in &clauses {
        for (a, slot) in slots.iter().enumerate() {
            edges.extend(slot.edges());
            for (b, other) in slots.iter().enumerate() {
                if a != b {
                    edges.push((slot.ua, other.ub));
                }
            }
        }
    }

    let mut next = clauses.len() * 3 * SLOT_SIZE;
    let keys: Vec<(usize, usize)> = (0..cnf.clauses.len())
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .collect();
    let lit = |(i, j): (usize, usize)| cnf.clauses[i][j];
    let mut y = Vec::new();
    for (idx, &first) in keys.iter().enumerate() {
        for &second in &keys[idx + 1..] {
            if lit(first) == -lit(second) && (opts.intra_clause || first.0 != second.0) {
                y.push(ConflictVertex {
                    first,
                    second,
                    vertex: next,
                });
                edges.push((next, clauses[first.0][first.1].w));
                edges.push((next, clauses[second.0][second.1].w));
                next += 1;
            }
        }
    }
    let (z, z_prime) = (next, next + 1);
    next += 2;
    edges.extend(y.iter().map(|c| (z, c.vertex)));
    edges.push((z, z_prime));

    let mut path = Vec::new();
    let mut prev = z;
    for _ in 5..k {
        let (v, leaf) = (next, next + 1);
        next += 2;
        edges.push((prev, v));
        edges.push((v, leaf));
        path.push((v, leaf));
        prev = v;
    }

    let g = Graph::from_edges(next, edges).expect("gadget edges are simple");
    let t = VertexSet::from_vertices(next, clauses.iter().flatten().flat_map(|s| s.leaves()));
    Ok((
        g,
        GadgetMap {
            k,
            clauses,
            y,
            z,
            z_prime,
            path,
            t,
        },
    ))
}

/// `{z'} ∪ {uA of every true slot} ∪ T ∪` the path leaves.
pub fn witness_seed(
    cnf: &CnfFormula,
    a: &Assignment,
    gm: &GadgetMap,
) -> Result<VertexSet, ReductionError> {
    if let Some(i) = cnf.first_unsatisfied(a) {
        return Err(ReductionError::NotSatisfying(i + 1));
    }
    let mut seed = gm.t.clone();
    seed.insert(gm.z_prime);
    for &(_, leaf) in &gm.path {
        seed.insert(leaf);
    }
    for (i, slots) in gm.clauses.iter().enumerate() {
        for j in cnf.true_slots(i, a) {
            seed.insert(slots[j].ua);
        }
    }
    Ok(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Exactly(u32),
    AtMost(u32),
}

impl Expect {
    pub fn admits(self, t: Time) -> bool {
        match self {
            Expect::Exactly(k) => t.is_exactly(k),
            Expect::AtMost(k) => t.finite().is_some_and(|t| t <= k),
        }
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Exactly(k) => write!(f, "= {k}"),
            Expect::AtMost(k) => write!(f, "<= {k}"),
        }
    }
}

/// One scheduled time. Roles are printed with 1-based clause and slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub role: String,
    pub vertex: usize,
    pub expected: Expect,
    pub observed: Time,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.expected.admits(self.observed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub n: usize,
    pub bipartite: bool,
    pub percolates: bool,
    pub t: Time,
    pub k: usize,
    pub checks: Vec<Check>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.bipartite
            && self.percolates
            && self.t.is_exactly(self.k as u32)
            && self.checks.iter().all(Check::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok())
    }

    pub fn observed(&self, role: &str) -> Option<Time> {
        self.checks
            .iter()
            .find(|c| c.role == role)
            .map(|c| c.observed)
    }
}

pub fn verify_reduction(
    cnf: &CnfFormula,
    a: &Assignment,
    k: usize,
) -> Result<ReductionReport, ReductionError> {
    verify_reduction_with(cnf, a, k, ReductionOptions::default())
}

/// Builds the gadget, seeds the witness and checks the schedule: per
/// slot the chain and leaf times, `uA`/`w`/`ℓ` of true slots at 0/1/2,
/// `w` of false slots at 3, every `ℓ` by time 3 and every `uA`/`uB` by
/// time 4. In a clause with a single true slot the square is pinned
/// exactly: `uB` of that slot at 3, `ℓ` of the others at 3 and their
/// `uA`/`uB` at 4. With two or more true slots the extra `uA` seeds reach
/// the other `uB`s at time 1, so those exact values cannot hold. Then
/// every `y` at 4, `z` at 5 and the `j`-th path vertex at `5 + j`.
pub fn verify_reduction_with(
    cnf: &CnfFormula,
    a: &Assignment,
    k: usize,
    opts: ReductionOptions,
) -> Result<ReductionReport, ReductionError> {
    let (g, gm) = build_reduction_with(cnf, k, opts)?;
    if gm.y.is_empty() {
        return Err(ReductionError::EmptyY);
    }
    let seed = witness_seed(cnf, a, &gm)?;
    let trace = percolate(&g, &seed);
    let times = trace.times();
    let mut checks = Vec::new();
    let mut check = |role: String, vertex: usize, expected: Expect| {
        checks.push(Check {
            role,
            vertex,
            expected,
            observed: times[vertex],
        });
    };

    for (i, slots) in gm.clauses.iter().enumerate() {
        let truth = cnf.true_slots(i, a);
        let unique = truth.len() == 1;
        for (j, slot) in slots.iter().enumerate() {
            let at = |name: &str| format!("{name}[{},{}]", i + 1, j + 1);
            let on = truth.contains(&j);
            for (idx, &v) in slot.p.iter().enumerate() {
                check(
                    at(&format!("p{}", idx + 1)),
                    v,
                    Expect::Exactly(2 - idx as u32),
                );
            }
            for (idx, &v) in slot.r.iter().enumerate() {
                check(
                    at(&format!("r{}", idx + 1)),
                    v,
                    Expect::Exactly(2 - idx as u32),
                );
            }
            for (idx, (&qv, &sv)) in slot.q.iter().zip(&slot.s).enumerate() {
                check(at(&format!("q{idx}")), qv, Expect::Exactly(0));
                check(at(&format!("s{idx}")), sv, Expect::Exactly(0));
            }
            if on {
                check(at("uA"), slot.ua, Expect::Exactly(0));
                check(at("w"), slot.w, Expect::Exactly(1));
                check(at("l"), slot.l, Expect::Exactly(2));
                check(
                    at("uB"),
                    slot.ub,
                    if unique {
                        Expect::Exactly(3)
                    } else {
                        Expect::AtMost(4)
                    },
                );
            } else {
                check(at("w"), slot.w, Expect::Exactly(3));
                check(
                    at("l"),
                    slot.l,
                    if unique {
                        Expect::Exactly(3)
                    } else {
                        Expect::AtMost(3)
                    },
                );
                let e = if unique {
                    Expect::Exactly(4)
                } else {
                    Expect::AtMost(4)
                };
                check(at("uA"), slot.ua, e);
                check(at("uB"), slot.ub, e);
            }
        }
    }
    for c in &gm.y {
        let role = format!(
            "y[({},{}),({},{})]",
            c.first.0 + 1,
            c.first.1 + 1,
            c.second.0 + 1,
            c.second.1 + 1
        );
        check(role, c.vertex, Expect::Exactly(4));
    }
    check("z".into(), gm.z, Expect::Exactly(5));
    check("z'".into(), gm.z_prime, Expect::Exactly(0));
    for (idx, &(v, leaf)) in gm.path.iter().enumerate() {
        check(
            format!("path{}", idx + 1),
            v,
            Expect::Exactly(6 + idx as u32),
        );
        check(format!("path{}-leaf", idx + 1), leaf, Expect::Exactly(0));
    }

    Ok(ReductionReport {
        n: g.n(),
        bipartite: is_bipartite(&g).is_some(),
        percolates: trace.percolates(),
        t: trace.percolation_time(),
        k,
        checks,
    })
}
