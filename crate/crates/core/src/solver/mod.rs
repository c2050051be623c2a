//! Discrete Aleksandrov solvers: exact subgradient cells in the plane and a monotone
//! wide-stencil scheme on box grids, plus Picard iteration for `|u|^q` right-hand sides.

mod boundary;
mod comparison;
mod config;
mod dirichlet;
mod geometric;
mod mesh;
mod picard;
mod rhs;
mod solution;
mod stencil;
pub mod triangulation;

pub use boundary::BoundaryData;
pub use comparison::{discrete_comparison_check, ComparisonReport};
pub use config::{Backend, SolverConfig};
pub use dirichlet::solve_dirichlet;
pub use mesh::{planar_nodes, PlanarNodes, INTERIOR_GAP};
pub use picard::solve_power_rhs;
pub use rhs::{GasPoint, RhsSpec};
pub use solution::{Diagnostics, DiscreteSolution, Interpolator, Layout, SOLUTION_SCHEMA_VERSION};
pub use stencil::{orthogonal_frames, stencil_directions};
