//! Integer feasibility models, the built-in exact engine and LP-format I/O.

mod lp_format;
mod model;
mod solver;

pub use lp_format::{export_lp, parse_lp};
pub use model::{IlpModel, LinearConstraint, Sense, VarId, VarKind, Variable};
pub use solver::{solve, solve_until, SolveOutcome, SolveStats, SolveStatus};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IlpError {
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("LP parse error: {0}")]
    Parse(String),
    #[error("solver bug: {0}")]
    Internal(String),
}
