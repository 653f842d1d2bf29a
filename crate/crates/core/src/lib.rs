//! 2-neighbour bootstrap percolation on finite simple graphs.
//!
//! A vertex becomes infected once two of its neighbours are. This crate
//! simulates the process, computes the maximum percolation time `t(G)`
//! exhaustively on small graphs, decides `t(G) ≥ 3` and (for bipartite
//! graphs) `t(G) ≥ 4` in polynomial time, grows decider witnesses into
//! hull sets, and builds the 3-SAT gadget showing `t(G) ≥ k` is hard on
//! bipartite graphs for `k ≥ 5`.
//!
//! Vertices are 0-based `usize` indices internally and 1-based in every
//! file format and JSON document.

pub mod census;
pub mod constructors;
pub mod deciders;
pub mod engine;
pub mod families;
pub mod gen;
pub mod graph;
pub mod json;
mod kernel;
pub mod oracle;
pub mod parallel;
pub mod reduction;
pub mod set;

pub use constructors::{
    extend_bip3, extend_bip4, extend_gen3, find_small_certificate, ConstructError,
};
pub use deciders::{
    decide_bip3, decide_bip4, decide_gen3, Decider, DeciderError, ReplayError, Witness, WitnessKind,
};
pub use engine::{
    exists_vertex_at_exact_time, infection_time, infects_at_exact_time, is_hull_set, percolate,
    reduce_time, set_percolation_time, simulate, EngineError, InfectionTrace, Time, THRESHOLD,
};
pub use families::{
    centre_partners, degree_one_set, gamma_family, mpq, pendant_components, representative_t0u,
    FamilyError, GammaKind, GammaMember, MpqPartition, PendantComponent,
};
pub use graph::{
    ball, components_excluding, components_within, distance_layers, distances, far_set,
    is_bipartite, is_connected, parse_graph, Bipartition, DistanceLayers, Graph, GraphError,
    ParseError, ParseErrorKind, Side,
};
pub use oracle::{
    brute_force, brute_force_t, enumerate_percolating_sets, is_co_convex, OracleError, OracleResult,
};
pub use parallel::Workers;
pub use reduction::{
    build_reduction, build_reduction_with, parse_assignment, parse_dimacs, verify_reduction,
    verify_reduction_with, witness_seed, Assignment, CnfError, CnfFormula, GadgetMap,
    ReductionError, ReductionOptions, ReductionReport,
};
pub use set::VertexSet;
