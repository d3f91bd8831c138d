//! Exact anytime solver for assembly line balancing with sequence-dependent
//! setup times (station-count minimization and cycle-time minimization).
//!
//! The solver runs complete anytime beam search over dynamic-programming
//! state spaces with admissible dual bounds and dominance pruning. Small
//! instances can be cross-checked with an exhaustive oracle.

pub mod generate;
pub mod harness;
pub mod instance;
pub mod local_improve;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod preprocess;
pub mod search;
pub mod solution;
pub mod taskset;

pub use instance::{Instance, ProblemType, RoundingPolicy, Time};
pub use preprocess::DerivedData;
pub use search::{solve_type1, solve_type2, SearchConfig, SolveResult, Status};
pub use solution::Solution;
pub use taskset::TaskSet;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Instance(#[from] instance::InstanceError),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("oracle refuses {n} tasks (limit {limit})")]
    OracleGuard { n: usize, limit: usize },
    #[error("internal consistency fault: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
