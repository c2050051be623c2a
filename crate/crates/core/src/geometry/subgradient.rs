use crate::error::{param, Error, Result};
use crate::geometry::{ConvexDomain, Shape};

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 5000;

/// Nodal values of a piecewise-linear function in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlFunction {
    pub nodes: Vec<[f64; 2]>,
    pub values: Vec<f64>,
}

/// Subdifferential of the convex envelope at a node.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Bounded(Vec<[f64; 2]>),
    Unbounded,
}

impl Cell {
    pub fn area(&self) -> f64 {
        match self {
            Cell::Bounded(p) => polygon_area(p),
            Cell::Unbounded => f64::INFINITY,
        }
    }
}

pub(crate) fn polygon_area(p: &[[f64; 2]]) -> f64 {
    let m = p.len();
    if m < 3 {
        return 0.0;
    }
    let s: f64 = (0..m)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % m]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    (0.5 * s).abs()
}

/// Clip a convex polygon by `a · p ≤ b`.
fn clip(poly: &[[f64; 2]], a: [f64; 2], b: f64) -> Vec<[f64; 2]> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let p = poly[i];
        let q = poly[(i + 1) % m];
        let fp = a[0] * p[0] + a[1] * p[1] - b;
        let fq = a[0] * q[0] + a[1] * q[1] - b;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

impl PlFunction {
    fn check(&self) -> Result<()> {
        if self.nodes.len() != self.values.len() {
            return param("node and value counts differ");
        }
        if self.nodes.is_empty() {
            return param("empty node set");
        }
        Ok(())
    }

    fn scales(&self) -> (f64, f64) {
        let umin = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let umax = self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut dmin = f64::INFINITY;
        for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
                if d > 0.0 {
                    dmin = dmin.min(d);
                }
            }
        }
        if !dmin.is_finite() {
            dmin = 1.0;
        }
        (umax - umin, dmin)
    }
}

fn cell_with_scales(f: &PlFunction, i: usize, range: f64, dmin: f64) -> Result<Cell> {
    let big = 1e6 * (1.0 + range) / dmin;
    let tol = 1e-12 * (1.0 + f.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let xi = f.nodes[i];
    let ui = f.values[i];
    let mut order: Vec<usize> = (0..f.nodes.len()).filter(|&j| j != i).collect();
    let d2 = |j: usize| (f.nodes[j][0] - xi[0]).powi(2) + (f.nodes[j][1] - xi[1]).powi(2);
    order.sort_by(|&a, &b| d2(a).total_cmp(&d2(b)));
    let square = vec![[-big, -big], [big, -big], [big, big], [-big, big]];
    let mut relaxed = square;
    for &j in &order {
        let a = [f.nodes[j][0] - xi[0], f.nodes[j][1] - xi[1]];
        if a[0] == 0.0 && a[1] == 0.0 {
            if f.values[j] < ui - tol {
                return Err(Error::Convexity(format!("duplicate node {i} lies above node {j}")));
            }
            continue;
        }
        let b = f.values[j] - ui;
        relaxed = clip(&relaxed, a, b + tol);
        if relaxed.is_empty() {
            return Err(Error::Convexity(format!("node {i} lies above the lower convex hull")));
        }
    }
    let lim = big * (1.0 - 1e-9);
    if relaxed.iter().any(|p| p[0].abs() >= lim || p[1].abs() >= lim) {
        return Ok(Cell::Unbounded);
    }
    // Redo the clipping from a box fitted to the cell to avoid cancellation against `big`.
    let fit = 2.0 * relaxed.iter().fold(1.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()));
    let mut exact = vec![[-fit, -fit], [fit, -fit], [fit, fit], [-fit, fit]];
    for &j in &order {
        let a = [f.nodes[j][0] - xi[0], f.nodes[j][1] - xi[1]];
        if a[0] != 0.0 || a[1] != 0.0 {
            exact = clip(&exact, a, f.values[j] - ui);
        }
    }
    Ok(Cell::Bounded(exact))
}

/// Subdifferential cell of the lower convex envelope at node `i`.
pub fn subgradient_cell(f: &PlFunction, i: usize) -> Result<Cell> {
    f.check()?;
    if i >= f.nodes.len() {
        return param(format!("node {i} out of range"));
    }
    let (range, dmin) = f.scales();
    cell_with_scales(f, i, range, dmin)
}

/// Lebesgue measure of `∂f(E)` for the node subset `E`; `+∞` when `E` touches the hull boundary.
pub fn subgradient_measure(f: &PlFunction, subset: &[usize]) -> Result<f64> {
    subgradient_measure_with(f, subset, DEFAULT_BRUTE_FORCE_LIMIT)
}

pub fn subgradient_measure_with(f: &PlFunction, subset: &[usize], limit: usize) -> Result<f64> {
    f.check()?;
    if f.nodes.len() > limit {
        return param(format!("{} nodes exceed the brute-force limit {limit}", f.nodes.len()));
    }
    let (range, dmin) = f.scales();
    // Every node must sit on the hull, not just the queried ones.
    let mut areas = vec![0.0; f.nodes.len()];
    for i in 0..f.nodes.len() {
        areas[i] = cell_with_scales(f, i, range, dmin)?.area();
    }
    let mut seen = vec![false; f.nodes.len()];
    let mut total = 0.0;
    for &i in subset {
        if i >= f.nodes.len() {
            return param(format!("node {i} out of range"));
        }
        if !seen[i] {
            seen[i] = true;
            total += areas[i];
        }
    }
    Ok(total)
}

/// Area of the apex cell of the cone over a polygon with value −1 at `apex` and 0 on the
/// boundary.
pub fn conical_apex_area(domain: &ConvexDomain, apex: [f64; 2]) -> Result<f64> {
    let Shape::Polygon { vertices } = domain.shape() else {
        if let Shape::Box { lo, hi } = domain.shape() {
            if lo.len() == 2 {
                let v = [[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]];
                return apex_area(&v, domain, apex);
            }
        }
        return param("conical functions need a polygonal domain");
    };
    apex_area(vertices, domain, apex)
}

fn apex_area(vertices: &[[f64; 2]], domain: &ConvexDomain, apex: [f64; 2]) -> Result<f64> {
    if !domain.contains(&apex) {
        return Err(Error::OutsideDomain { point: apex.to_vec() });
    }
    let mut nodes = vertices.to_vec();
    let mut values = vec![0.0; nodes.len()];
    nodes.push(apex);
    values.push(-1.0);
    let f = PlFunction { nodes, values };
    let k = f.nodes.len() - 1;
    subgradient_measure(&f, &[k])
}
