//! Undirected simple graphs and the distance/structure queries the
//! percolation procedures are phrased in.
//!
//! Vertices are dense `0..n` indices. The text format is 1-based:
//!
//! ```text
//! # optional comments
//! p edge <n> <m>
//! e <u> <v>      (exactly m lines)
//! ```

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `p edge <n> <m>` header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("header given twice")]
    DuplicateHeader,
    #[error("malformed edge line: {0}")]
    BadEdge(String),
    #[error("endpoint {0} out of range 1..={1}")]
    OutOfRange(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("header announced {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("unrecognised line: {0}")]
    Unrecognised(String),
}

/// Immutable undirected simple graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
    /// Neighbourhood bit masks, present when `n <= 64`.
    masks: Option<Vec<u64>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from 0-based edges, rejecting loops and repeats.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::OutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let m = seen.len();
        Ok(Graph::from_sorted_adjacency(adj, m))
    }

    fn from_sorted_adjacency(adj: Vec<Vec<usize>>, m: usize) -> Graph {
        let masks = (adj.len() <= 64).then(|| {
            adj.iter()
                .map(|list| list.iter().fold(0u64, |acc, &w| acc | (1u64 << w)))
                .collect()
        });
        Graph { adj, m, masks }
    }

    /// The graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Graph {
        Graph::from_sorted_adjacency(vec![Vec::new(); n], 0)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        match &self.masks {
            Some(masks) => masks[a] >> b & 1 == 1,
            None => self.adj[a].binary_search(&b).is_ok(),
        }
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    /// Each edge once, as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    pub(crate) fn masks(&self) -> Option<&[u64]> {
        self.masks.as_deref()
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::OutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Renders the 1-based edge-list text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.n(), self.m());
        for (a, b) in self.edges() {
            let _ = writeln!(out, "e {} {}", a + 1, b + 1);
        }
        out
    }
}

/// Parses the 1-based edge-list text format.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let err = |line: usize, kind| ParseError { line, kind };
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(err(line_no, ParseErrorKind::DuplicateHeader));
                }
                let fields: Vec<&str> = tokens.collect();
                let parsed = match fields.as_slice() {
                    ["edge", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
                    _ => None,
                };
                match parsed {
                    Some(nm) => header = Some(nm),
                    None => return Err(err(line_no, ParseErrorKind::BadHeader(line.to_string()))),
                }
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(err(line_no, ParseErrorKind::MissingHeader));
                };
                let fields: Vec<&str> = tokens.collect();
                let (a, b) = match fields.as_slice() {
                    [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => return Err(err(line_no, ParseErrorKind::BadEdge(line.to_string()))),
                    },
                    _ => return Err(err(line_no, ParseErrorKind::BadEdge(line.to_string()))),
                };
                for v in [a, b] {
                    if v == 0 || v > n {
                        return Err(err(line_no, ParseErrorKind::OutOfRange(v, n)));
                    }
                }
                if a == b {
                    return Err(err(line_no, ParseErrorKind::SelfLoop(a)));
                }
                let key = (a.min(b), a.max(b));
                if !seen.insert(key) {
                    return Err(err(line_no, ParseErrorKind::DuplicateEdge(key.0, key.1)));
                }
                edges.push((a - 1, b - 1));
            }
            _ => return Err(err(line_no, ParseErrorKind::Unrecognised(line.to_string()))),
        }
    }

    let Some((n, m)) = header else {
        return Err(err(last_line.max(1), ParseErrorKind::MissingHeader));
    };
    if edges.len() != m {
        return Err(err(
            last_line.max(1),
            ParseErrorKind::EdgeCount {
                expected: m,
                found: edges.len(),
            },
        ));
    }
    // Validated above; construction cannot fail.
    Ok(Graph::from_edges(n, edges).expect("validated edge list"))
}

/// BFS distances from `u`; `None` for unreachable vertices.
pub fn distances(g: &Graph, u: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    dist[u] = Some(0);
    queue.push_back(u);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for &w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Breadth-first layers around a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceLayers {
    /// `layers[i]` holds the vertices at distance exactly `i`.
    pub layers: Vec<VertexSet>,
    /// Vertices in other components.
    pub unreachable: VertexSet,
}

impl DistanceLayers {
    /// Layer `i`, or the empty set past the eccentricity.
    pub fn layer(&self, i: usize) -> VertexSet {
        self.layers
            .get(i)
            .cloned()
            .unwrap_or_else(|| VertexSet::new(self.unreachable.capacity()))
    }

    /// Union of layers `0..=i`.
    pub fn within(&self, i: usize) -> VertexSet {
        let mut out = VertexSet::new(self.unreachable.capacity());
        for layer in self.layers.iter().take(i + 1) {
            out.union_with(layer);
        }
        out
    }
}

pub fn distance_layers(g: &Graph, u: usize) -> DistanceLayers {
    let n = g.n();
    let mut layers: Vec<VertexSet> = Vec::new();
    let mut unreachable = VertexSet::new(n);
    for (v, d) in distances(g, u).into_iter().enumerate() {
        match d {
            Some(d) => {
                while layers.len() <= d {
                    layers.push(VertexSet::new(n));
                }
                layers[d].insert(v);
            }
            None => {
                unreachable.insert(v);
            }
        }
    }
    DistanceLayers {
        layers,
        unreachable,
    }
}

/// Vertices at distance at least `k` from `u`. Vertices in other
/// components count as infinitely far and are included.
pub fn far_set(g: &Graph, u: usize, k: usize) -> VertexSet {
    let mut out = VertexSet::new(g.n());
    for (v, d) in distances(g, u).into_iter().enumerate() {
        if d.map_or(true, |d| d >= k) {
            out.insert(v);
        }
    }
    out
}

/// Vertices at distance at most `k` from `u`.
pub fn ball(g: &Graph, u: usize, k: usize) -> VertexSet {
    let mut out = VertexSet::new(g.n());
    for (v, d) in distances(g, u).into_iter().enumerate() {
        if d.is_some_and(|d| d <= k) {
            out.insert(v);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A proper 2-colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<Side>,
}

impl Bipartition {
    pub fn side(&self, v: usize) -> Side {
        self.side[v]
    }

    pub fn members(&self, side: Side) -> VertexSet {
        VertexSet::from_vertices(
            self.side.len(),
            self.side
                .iter()
                .enumerate()
                .filter(|(_, &s)| s == side)
                .map(|(v, _)| v),
        )
    }
}

/// BFS 2-colouring, rooted at the lowest-index vertex of each component
/// with that root on side A.
pub fn is_bipartite(g: &Graph) -> Option<Bipartition> {
    let n = g.n();
    let mut side: Vec<Option<Side>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(Side::A);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let here = side[v].unwrap();
            for &w in g.neighbors(v) {
                match side[w] {
                    None => {
                        side[w] = Some(here.other());
                        queue.push_back(w);
                    }
                    Some(s) if s == here => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(Bipartition {
        side: side.into_iter().map(Option::unwrap).collect(),
    })
}

/// Connected components of `g` restricted to `allowed`, ordered by
/// minimum member.
pub fn components_within(g: &Graph, allowed: &VertexSet) -> Vec<VertexSet> {
    let n = g.n();
    let mut seen = VertexSet::new(n);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in allowed.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = VertexSet::new(n);
        seen.insert(start);
        stack.push(start);
        while let Some(v) = stack.pop() {
            comp.insert(v);
            for &w in g.neighbors(v) {
                if allowed.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Components of `G - v`, ordered by minimum member.
pub fn components_excluding(g: &Graph, v: usize) -> Vec<VertexSet> {
    let mut allowed = VertexSet::full(g.n());
    allowed.remove(v);
    components_within(g, &allowed)
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1 || distances(g, 0).iter().all(Option::is_some)
}
