//! Comparison envelopes for planar surface tensions with atoms: a lower barrier built from a
//! log-Lipschitz function plus scaled cones, and an upper barrier from the scaled lozenge
//! surface tension on a right triangle sitting on one facet.

use crate::closed_forms::{surface_tension_t_closure, ClosedFormFunction};
use crate::error::{geometry, param, Result};
use crate::geometry::{dot, sub, ConvexDomain};
use crate::solver::{BoundaryData, DiscreteSolution, GasPoint};
use serde::{Deserialize, Serialize};

/// Right triangle `r T` with its right-angle corner at arclength `offset` along `facet`
/// (measured from the facet's first vertex) and its legs along the facet and inward normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrianglePlacement {
    pub facet: usize,
    pub offset: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeSide {
    pub nodes_checked: usize,
    /// Largest amount by which the inequality fails; negative when it holds strictly.
    pub max_violation: f64,
    pub worst_point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub c0: f64,
    pub cone_weights: Vec<f64>,
    pub tolerance: f64,
    pub lower: EnvelopeSide,
    pub upper: EnvelopeSide,
    pub pass: bool,
}

/// Coordinates along the facet (from its first vertex) and along the inward normal.
struct FacetFrame {
    origin: Vec<f64>,
    tangent: Vec<f64>,
    inward: Vec<f64>,
    length: f64,
}

impl FacetFrame {
    fn new(domain: &ConvexDomain, facet: usize) -> Result<Self> {
        let f = domain.facet(facet)?;
        if domain.dim() != 2 || f.vertices.len() != 2 {
            return param("envelopes need a planar polygon facet");
        }
        let e = sub(&f.vertices[1], &f.vertices[0]);
        let length = dot(&e, &e).sqrt();
        Ok(FacetFrame {
            origin: f.vertices[0].clone(),
            tangent: e.iter().map(|x| x / length).collect(),
            inward: f.normal.iter().map(|x| -x).collect(),
            length,
        })
    }

    fn local(&self, x: &[f64]) -> [f64; 2] {
        let w = sub(x, &self.origin);
        [dot(&w, &self.tangent), dot(&w, &self.inward)]
    }

    fn global(&self, y: [f64; 2]) -> Vec<f64> {
        (0..2).map(|k| self.origin[k] + y[0] * self.tangent[k] + y[1] * self.inward[k]).collect()
    }
}

fn in_triangle(y: [f64; 2], p: &TrianglePlacement, tol: f64) -> bool {
    let (a, b) = (y[0] - p.offset, y[1]);
    a >= -tol && b >= -tol && a + b <= p.r + tol
}

/// Check both envelopes at every node of `sol` (a solution of `det D²σ = 1 + Σ c_k δ_{q_k}`
/// with data `data`). `tolerance` defaults to the mesh width.
pub fn check_envelopes(
    sol: &DiscreteSolution,
    data: &BoundaryData,
    gas: &[GasPoint],
    placement: TrianglePlacement,
    tolerance: Option<f64>,
) -> Result<EnvelopeReport> {
    let dom = &sol.domain;
    let frame = FacetFrame::new(dom, placement.facet)?;
    let p = placement;
    if !(p.r > 0.0) {
        return geometry("triangle scale r must be positive");
    }
    // The base must sit strictly inside the facet so no corner of N touches rT.
    let eps = 1e-12 * frame.length;
    if !(p.offset > eps && p.offset + p.r < frame.length - eps) {
        return geometry(format!(
            "triangle base [{}, {}] is not strictly inside facet {} of length {}",
            p.offset,
            p.offset + p.r,
            p.facet,
            frame.length
        ));
    }
    let apex = frame.global([p.offset, p.r]);
    if !dom.contains_closed(&apex) || !dom.contains_closed(&frame.global([p.offset + p.r, 0.0])) {
        return geometry("triangle leaves the domain");
    }
    for g in gas {
        if g.at.len() != 2 {
            return param("gas points must be planar");
        }
        if in_triangle(frame.local(&g.at), &p, 1e-12) {
            return geometry(format!("gas point {:?} lies in the triangle", g.at));
        }
    }
    for v in dom.facets().iter().flat_map(|f| f.vertices.iter()) {
        if in_triangle(frame.local(v), &p, eps) {
            return geometry(format!("corner {v:?} lies in the triangle"));
        }
    }
    let tol = tolerance.unwrap_or(sol.h);
    // Subtract the affine function matching the data along the facet line.
    let f = dom.facet(p.facet)?;
    let (la, lb) = (data.value(dom, &f.vertices[0]), data.value(dom, &f.vertices[1]));
    let affine = |x: &[f64]| la + (lb - la) * frame.local(x)[0] / frame.length;
    // C0: worst deficit of the shifted data below zero, relative to the distance to the line.
    let mut c0 = 0.0f64;
    for (i, x) in sol.nodes.iter().enumerate() {
        if !sol.boundary[i] {
            continue;
        }
        let y2 = frame.local(x)[1];
        if y2 > 1e-12 {
            c0 = c0.max(-(data.value(dom, x) - affine(x)) / y2);
        }
    }
    // Clears a negative zero from `max`.
    c0 += 0.0;
    let mut cones = Vec::with_capacity(gas.len());
    let mut weights = Vec::with_capacity(gas.len());
    for g in gas {
        let c = ClosedFormFunction::conical(dom.clone(), [g.at[0], g.at[1]], g.c)?;
        if let crate::closed_forms::FamilyParams::Conical { scale, .. } = c.params() {
            weights.push(*scale);
        }
        cones.push(c);
    }
    let d = dom.diam();
    let gamma = p.offset + 0.5 * p.r;
    let v = |y: [f64; 2]| -> f64 {
        if y[1] <= 0.0 {
            return 0.0;
        }
        (1.0 + 2.0 * d * d) * y[1] * (y[1] / d).ln() + y[1] * ((y[0] - gamma).powi(2) - d * d - c0)
    };
    let interp = sol.interpolator()?;
    let apex_val = interp.eval(&apex)? - affine(&apex);
    let mut lower = EnvelopeSide { nodes_checked: 0, max_violation: f64::NEG_INFINITY, worst_point: vec![] };
    let mut upper = EnvelopeSide { nodes_checked: 0, max_violation: f64::NEG_INFINITY, worst_point: vec![] };
    for (i, x) in sol.nodes.iter().enumerate() {
        let s = sol.values[i] - affine(x);
        let y = frame.local(x);
        let mut low = v(y);
        for c in &cones {
            low += c.value(x)?;
        }
        let gap = low - s;
        lower.nodes_checked += 1;
        if gap > lower.max_violation {
            lower.max_violation = gap;
            lower.worst_point = x.clone();
        }
        if in_triangle(y, &p, 1e-12 * p.r) {
            let t = [((y[0] - p.offset) / p.r).max(0.0), (y[1] / p.r).max(0.0)];
            let scale = (t[0] + t[1]).max(1.0);
            let st = surface_tension_t_closure([t[0] / scale, t[1] / scale])?;
            let up = p.r * p.r * st + apex_val * y[1] / p.r;
            let gap = s - up;
            upper.nodes_checked += 1;
            if gap > upper.max_violation {
                upper.max_violation = gap;
                upper.worst_point = x.clone();
            }
        }
    }
    let pass = lower.max_violation <= tol && upper.max_violation <= tol && upper.nodes_checked > 0;
    Ok(EnvelopeReport { c0, cone_weights: weights, tolerance: tol, lower, upper, pass })
}
