use super::solution::DiscreteSolution;
use crate::error::{Error, Result};
use serde::Serialize;

/// Slack for the pointwise order and the precondition checks.
pub const COMPARISON_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub nodes: usize,
    /// `max(u2 − u1)` over all nodes; nonpositive when `u1 ≥ u2`.
    pub max_violation: f64,
    pub worst_node: usize,
    pub pass: bool,
}

/// Check `u1 ≥ u2` given `u1 ≥ u2` on the boundary and `mass(u1) ≤ mass(u2)` per node.
pub fn discrete_comparison_check(u1: &DiscreteSolution, u2: &DiscreteSolution) -> Result<ComparisonReport> {
    if u1.len() != u2.len() {
        return Err(Error::NodeMismatch(format!("{} vs {} nodes", u1.len(), u2.len())));
    }
    for i in 0..u1.len() {
        let same = u1.nodes[i].len() == u2.nodes[i].len()
            && u1.nodes[i].iter().zip(&u2.nodes[i]).all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        if !same || u1.boundary[i] != u2.boundary[i] {
            return Err(Error::NodeMismatch(format!("node {i} differs")));
        }
    }
    let scale = u1.values.iter().chain(&u2.values).fold(1.0f64, |m, v| m.max(v.abs()));
    let mscale = u1.masses.iter().chain(&u2.masses).fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..u1.len() {
        if u1.boundary[i] {
            if u1.values[i] < u2.values[i] - COMPARISON_TOL * scale {
                return Err(Error::Validation(format!("boundary order fails at node {i}")));
            }
        } else if u1.masses[i] > u2.masses[i] + 1e-6 * mscale {
            return Err(Error::Validation(format!("mass order fails at node {i}")));
        }
    }
    let mut worst = (f64::NEG_INFINITY, 0);
    for i in 0..u1.len() {
        let d = u2.values[i] - u1.values[i];
        if d > worst.0 {
            worst = (d, i);
        }
    }
    Ok(ComparisonReport {
        nodes: u1.len(),
        max_violation: worst.0,
        worst_node: worst.1,
        pass: worst.0 <= COMPARISON_TOL * scale,
    })
}
