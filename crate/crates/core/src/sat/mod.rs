//! Incremental CDCL SAT engine.
//!
//! The public surface mirrors the usual incremental interface: load clauses with
//! [`Solver::add_clause`], query with [`Solver::solve`] under assumptions, run
//! [`Solver::propagate`] for unit propagation only, and reseed with
//! [`Solver::set_seed`]. Each `solve` reports its own conflict count, a model on
//! SAT and an assumption core on UNSAT.

mod heap;
mod random;
mod solver;
mod types;

pub use solver::{
    solver_with, Propagation, SolveOutcome, SolveStatus, Solver, SolverConfig, SolverStats,
};
pub use random::random_kcnf;
pub use types::{Assignment, Clause, CnfFormula, LBool, Lit};
