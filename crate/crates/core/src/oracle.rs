//! Exhaustive ground truth: the maximum percolation time by trying every
//! seed set.

use thiserror::Error;

use crate::engine::Time;
use crate::graph::Graph;
use crate::kernel::Kernel;
use crate::parallel::Workers;
use crate::set::VertexSet;

pub const DEFAULT_LIMIT: usize = 20;

/// Hard ceiling regardless of the configured limit: seeds are word masks.
const MASK_CEILING: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the exhaustive limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// `t(G)`.
    pub t: u32,
    /// The least (as a bit pattern) seed achieving `t`.
    pub seed: VertexSet,
}

fn check_size(g: &Graph, limit: usize) -> Result<(), OracleError> {
    let limit = limit.min(MASK_CEILING);
    if g.n() > limit {
        Err(OracleError::TooLarge { n: g.n(), limit })
    } else {
        Ok(())
    }
}

/// Vertices every hull set must contain: anything with fewer than two
/// neighbours can never be infected.
fn forced_mask(g: &Graph) -> u64 {
    g.vertices()
        .filter(|&v| g.degree(v) < 2)
        .fold(0, |m, v| m | 1 << v)
}

fn to_set(n: usize, mask: u64) -> VertexSet {
    VertexSet::from_vertices(n, (0..n).filter(|v| mask >> v & 1 == 1))
}

pub fn brute_force_t(g: &Graph, limit: usize) -> Result<u32, OracleError> {
    brute_force(g, limit, &Workers::sequential()).map(|r| r.t)
}

/// `t(G)` together with its least maximising seed.
pub fn brute_force(
    g: &Graph,
    limit: usize,
    workers: &Workers,
) -> Result<OracleResult, OracleError> {
    check_size(g, limit)?;
    let n = g.n();
    if n == 0 {
        return Ok(OracleResult {
            t: 0,
            seed: VertexSet::new(0),
        });
    }
    let forced = forced_mask(g);
    let total = 1u64 << n;
    let chunk_bits = n.min(10);
    let chunks = (total >> chunk_bits) as usize;

    // (time, mask) with the larger time winning and ties going to the
    // smaller mask.
    let best = workers.map_reduce(
        0..chunks,
        None::<(u32, u64)>,
        |c| {
            let mut kernel = Kernel::new(g);
            let mut best: Option<(u32, u64)> = None;
            let start = (c as u64) << chunk_bits;
            for mask in start..start + (1u64 << chunk_bits) {
                if mask & forced != forced {
                    continue;
                }
                kernel.run_mask(mask, u32::MAX);
                if kernel.percolated() {
                    let t = kernel.last_round();
                    if best.map_or(true, |(bt, _)| t > bt) {
                        best = Some((t, mask));
                    }
                }
            }
            best
        },
        |a, b| match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
                a
            } else {
                b
            }),
        },
    );
    let (t, mask) = best.expect("the full vertex set always percolates");
    Ok(OracleResult {
        t,
        seed: to_set(n, mask),
    })
}

/// Every percolating seed with its percolation time, in ascending bit
/// order.
pub fn enumerate_percolating_sets(
    g: &Graph,
    limit: usize,
) -> Result<Vec<(VertexSet, u32)>, OracleError> {
    Ok(percolating_masks(g, limit)?
        .into_iter()
        .map(|(mask, t)| (to_set(g.n(), mask), t))
        .collect())
}

/// Mask form of [`enumerate_percolating_sets`].
pub fn percolating_masks(g: &Graph, limit: usize) -> Result<Vec<(u64, u32)>, OracleError> {
    check_size(g, limit)?;
    let n = g.n();
    if n == 0 {
        return Ok(vec![(0, 0)]);
    }
    let forced = forced_mask(g);
    let mut kernel = Kernel::new(g);
    let mut out = Vec::new();
    for mask in 0..1u64 << n {
        if mask & forced != forced {
            continue;
        }
        kernel.run_mask(mask, u32::MAX);
        if kernel.percolated() {
            out.push((mask, kernel.last_round()));
        }
    }
    Ok(out)
}

/// Per-vertex times of a seed given as a mask, via the fast kernel.
pub fn times_for_mask(g: &Graph, mask: u64) -> Vec<Time> {
    let mut kernel = Kernel::new(g);
    kernel.run_mask(mask, u32::MAX);
    g.vertices().map(|v| kernel.time(v)).collect()
}

/// Every member of `t` has at most one neighbour outside `t`.
pub fn is_co_convex(g: &Graph, t: &VertexSet) -> bool {
    t.iter()
        .all(|v| g.neighbors(v).iter().filter(|&&w| !t.contains(w)).count() <= 1)
}
