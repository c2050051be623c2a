//! Convex domains, facet probes, rigid frames and the brute-force subgradient measure.

mod domain;
mod frame;
mod probe;
mod subgradient;

pub use domain::{unit_ball_volume, ConvexDomain, DomainFile, Facet, Profile, Shape, DOMAIN_SCHEMA_VERSION};
pub use frame::LocalFrame;
pub use probe::{normal_probe, normal_probe_at, NormalProbe};
pub use subgradient::{
    conical_apex_area, subgradient_cell, subgradient_measure, subgradient_measure_with, Cell, PlFunction,
    DEFAULT_BRUTE_FORCE_LIMIT,
};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn axpy(x: &[f64], t: f64, v: &[f64]) -> Vec<f64> {
    x.iter().zip(v).map(|(a, b)| a + t * b).collect()
}
