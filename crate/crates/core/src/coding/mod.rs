//! Coding points, the minimization model, and reduced networks.

pub mod detect;
pub mod ilp;
pub mod reduce;
pub mod search;

pub use detect::{detect_coding_points, CodingPointSet, CodingWitness, Usage};
pub use ilp::{build_ilp, Coupling, IlpError, IlpInstance, IlpViolation};
pub use reduce::reduce_network;
pub use search::{
    solve_min_coding_points, Backend, OptimizationResult, PartitionOutcome, SearchTrace, SolveError, Solver,
};
