//! Explicit barriers, the Lobachevsky function and the lozenge surface tension.

mod families;
mod lobachevsky;
mod lozenge;
mod mass;
mod verify;

pub use families::{ClosedFormFunction, Evaluation, Family, FamilyParams};
pub use lobachevsky::{clausen2, lobachevsky, LobachevskyEvaluator};
pub use lozenge::{in_lozenge_triangle, surface_tension_t, surface_tension_t_closure, surface_tension_t_hessian};
pub use mass::{bootstrap_sequence, pn_total_mass};
pub use verify::{relative_violation, sample_points, verify_family_inequality, InequalityReport, INEQUALITY_SLACK};
