//! Boundary growth fits, finite-difference oracles, envelope checks and the Abreu comparison
//! machinery.

mod abreu;
mod envelopes;
mod fd;
mod fit;
mod probe;

pub use abreu::{abreu_bootstrap_check, abreu_bootstrap_check_with, AbreuReport, AlphaCheck};
pub use envelopes::{check_envelopes, EnvelopeReport, EnvelopeSide, TrianglePlacement};
pub use fd::{fd_gradient, fd_hessian, fd_hessian_det, one_sided_derivative, Evaluable, FnField, SolutionField};
pub use fit::{fit_exponent, ExponentFit, Model};
pub use probe::{probe_samples, ProbeSpec};
