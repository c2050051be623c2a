//! Boundary growth of solutions to `det D²u = |u|^q` and dimer surface tensions.
//!
//! The crate has five layers:
//! - [`geometry`]: convex domains, facet probes and the brute-force subgradient measure,
//! - [`closed_forms`]: explicit barriers, the Lobachevsky function and the lozenge surface tension,
//! - [`solver`]: discrete Aleksandrov solvers (geometric 2D and wide-stencil n-D),
//! - [`analysis`]: exponent fits, finite-difference Hessians and envelope checks,
//! - [`cli`]: experiment configs and the runner behind the `sharpbound` binary.

pub mod analysis;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod sampling;
pub mod solver;

pub use error::{Error, Result};
