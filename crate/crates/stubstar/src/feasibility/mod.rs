//! Decides realizability of an instance in a graph class.
//!
//! [`build::build_system`] translates an instance into an integer
//! linear system over star counts; [`solver`] searches it;
//! [`validate`] re-checks ensembles semantically and hosts the
//! degree-sequence diagnostic comparing the two encodings of the
//! simple-graph rows.

pub mod build;
pub mod solver;
pub mod system;
pub mod validate;

pub use build::{build_system, Encoding};
pub use solver::search_stats;
pub use solver::{
    count_solutions, enumerate_all, is_feasible, solve_first, visit_all, EnumerationOutcome,
};
pub use system::{Assignment, LinearSystem, SystemError, VarId};
pub use validate::{validate_ensemble, ValidationReport, Violation};
