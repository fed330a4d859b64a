//! Bohr-type inequalities for bounded holomorphic functions on the unit
//! polydisc: truncated power series with certified tails, the functionals
//! built on them, radius solvers, and randomized verification suites.

// `!(x < y)` is used deliberately so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod error;
pub mod families;
pub mod functionals;
pub mod radius;
pub mod report;
pub mod series;
pub mod verification;

pub use error::{BohrError, Result};
pub use report::{EvalReport, ModulusPath, Verdict};
