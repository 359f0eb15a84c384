//! Constrained combinatorial testing on an embedded incremental SAT engine.
//!
//! * [`sat`]: incremental CDCL solver with assumptions, cores, unit-propagation
//!   queries, seeded randomization and conflict budgets.
//! * [`model`]: SUT models, their CNF encoding, tuples, tests and suites.
//! * [`formats`]: DIMACS, CASA, ACTS, Extended ACTS and CSV suites.
//! * [`sutgen`]: Boolean SUT benchmarks carved out of SAT instances at a target hardness.
//! * [`ipog`] and [`bot`]: covering-array builders.
//! * [`verify`]: independent validation and brute-force oracles.
//! * [`cli`] and [`harness`]: the `ctforge` command and the IPOG/BOT-its comparison harness.

pub mod bot;
pub mod cli;
pub mod error;
pub mod formats;
pub mod harness;
pub mod ipog;
pub mod model;
pub mod sat;
pub mod sutgen;
pub mod verify;

pub use error::{Error, Result};
