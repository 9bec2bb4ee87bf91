//! Exact and heuristic solvers for the second Hamiltonian decomposition
//! problem: given Hamiltonian cycles `x` and `y`, decide whether the union
//! multigraph `x ∪ y` splits into two edge-disjoint Hamiltonian cycles other
//! than `x` and `y`.
//!
//! The crate is organised bottom-up:
//!
//! - [`multigraph`]: cycles, the union multigraph, 2-factor pairs, components.
//! - [`instance_gen`]: seeded random, pyramidal and four-peak cycle generators.
//! - [`ilp`]: integer feasibility models, a branch-and-propagate engine, LP I/O.
//! - [`formulations`]: DFJ and MTZ models of the problem and their decoding.
//! - [`heuristics`]: chain edge fixing, local search and variable neighbourhood descent.
//! - [`orchestrator`]: the lazy subtour-cut loop, its heuristic variant and the MTZ path.
//! - [`oracle`]: exhaustive enumeration of decompositions for small graphs.

pub mod error;
pub mod formulations;
pub mod heuristics;
pub mod ilp;
pub mod instance_gen;
pub mod multigraph;
pub mod oracle;
pub mod orchestrator;

pub use error::{Error, Result};
pub use heuristics::{Cut, HeuristicParams};
pub use instance_gen::{generate_instance, Instance, InstanceKind, InstanceSpec};
pub use multigraph::{
    build_union, components, is_second_decomposition, peaks, ComponentReport, Edge, EdgeId,
    HamCycle, Origin, Side, TwoFactorPair, UnionMultigraph, Vertex,
};
pub use orchestrator::{solve_dfj, solve_dfj_heuristic, solve_mtz, Algorithm, RunResult, Verdict};
