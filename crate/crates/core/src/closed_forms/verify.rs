use super::families::{ClosedFormFunction, FamilyParams};
use crate::error::{Error, Result};
use crate::geometry::subgradient_measure;
use crate::geometry::{axpy, norm, sub, ConvexDomain, PlFunction, Shape};
use crate::sampling::halton;
use serde::Serialize;

/// Arithmetic slack allowed on the relative violation.
pub const INEQUALITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub family: String,
    pub params: FamilyParams,
    pub dimension: usize,
    pub samples: usize,
    pub max_violation: f64,
    pub worst_point: Vec<f64>,
    pub pass: bool,
}

/// `(lhs − rhs) / max(1, |lhs|, |rhs|)`, with infinities resolved by sign.
pub fn relative_violation(lhs: f64, rhs: f64) -> f64 {
    if lhs.is_nan() || rhs.is_nan() {
        return f64::INFINITY;
    }
    if lhs == rhs {
        return 0.0;
    }
    if rhs == f64::INFINITY || lhs == f64::NEG_INFINITY {
        return -1.0;
    }
    if lhs == f64::INFINITY || rhs == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    (lhs - rhs) / 1f64.max(lhs.abs()).max(rhs.abs())
}

/// Halton points of the domain plus points at distance `2^{−j}` from the boundary along
/// rays from the center. Deterministic.
pub fn sample_points(domain: &ConvexDomain, count: usize) -> Vec<Vec<f64>> {
    let n = domain.dim();
    let (lo, hi) = domain.bounding_box();
    let n_rays = count * 3 / 10;
    let n_bulk = count - n_rays;
    let mut out = Vec::with_capacity(count);
    let map = |u: &[f64]| -> Vec<f64> { (0..n).map(|k| lo[k] + u[k] * (hi[k] - lo[k])).collect() };
    let mut i = 0u64;
    while out.len() < n_bulk && i < 1000 * count as u64 + 1000 {
        let p = map(&halton(i, n));
        i += 1;
        if domain.contains(&p) {
            out.push(p);
        }
    }
    let c = domain.center();
    let mut made = 0;
    let mut i = 0u64;
    while made < n_rays && i < 1000 * count as u64 + 1000 {
        let y = map(&halton(i + 7919, n));
        let j = (i % 40) as i32 + 1;
        i += 1;
        let v = sub(&y, &c);
        let l = norm(&v);
        if l < 1e-9 {
            continue;
        }
        let u: Vec<f64> = v.iter().map(|x| x / l).collect();
        let t = domain.ray_exit(&c, &u);
        let d = 0.5f64.powi(j);
        if d >= t {
            continue;
        }
        let p = axpy(&c, t - d, &u);
        if domain.contains(&p) {
            out.push(p);
            made += 1;
        }
    }
    out
}

/// Sample the defining inequality of a family and report the worst relative violation.
pub fn verify_family_inequality(f: &ClosedFormFunction, sample_count: usize) -> Result<InequalityReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut worst_point = Vec::new();
    let mut used = 0;
    let track = |v: f64, x: &[f64], worst: &mut f64, wp: &mut Vec<f64>| {
        if v > *worst {
            *worst = v;
            *wp = x.to_vec();
        }
    };
    match f.params() {
        FamilyParams::SurfaceTensionT => {
            return Err(Error::Unsupported(
                "the lozenge surface tension is checked through its Hessian, not an inequality".into(),
            ))
        }
        FamilyParams::Conical { apex, mass, scale, .. } => {
            let Shape::Polygon { vertices } = f.domain().shape().clone() else {
                let (lo, hi) = f.domain().bounding_box();
                return conical_report(
                    f,
                    &[[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]],
                    *apex,
                    *mass,
                    *scale,
                );
            };
            return conical_report(f, &vertices, *apex, *mass, *scale);
        }
        _ => {}
    }
    for x in sample_points(f.domain(), sample_count) {
        for (lhs, rhs) in f.inequality_sides(&x)? {
            track(relative_violation(lhs, rhs), &x, &mut worst, &mut worst_point);
        }
        used += 1;
    }
    if let FamilyParams::PnWitness { a, .. } = f.params() {
        // Hölder-failure witness along the axis: |w(0, x_n)| ≥ x_n^a / 2 below the threshold.
        let n = f.dim();
        let thr = 0.5f64.powf(1.0 / (1.0 - a));
        for j in 0..60 {
            let mut x = vec![0.0; n];
            x[n - 1] = thr * 0.75f64.powi(j);
            let w = f.value(&x)?;
            track(relative_violation(x[n - 1].powf(*a) / 2.0, w.abs()), &x, &mut worst, &mut worst_point);
            used += 1;
        }
    }
    Ok(InequalityReport {
        family: f.family().tag().to_string(),
        params: f.params().clone(),
        dimension: f.dim(),
        samples: used,
        max_violation: worst,
        worst_point,
        pass: worst <= INEQUALITY_SLACK,
    })
}

fn conical_report(
    f: &ClosedFormFunction,
    vertices: &[[f64; 2]],
    apex: [f64; 2],
    mass: f64,
    scale: f64,
) -> Result<InequalityReport> {
    let mut nodes = vertices.to_vec();
    let mut values = vec![0.0; nodes.len()];
    nodes.push(apex);
    values.push(-scale);
    let k = nodes.len() - 1;
    let measured = subgradient_measure(&PlFunction { nodes, values }, &[k])?;
    let v = (measured - mass).abs() / mass.max(1.0);
    Ok(InequalityReport {
        family: f.family().tag().to_string(),
        params: f.params().clone(),
        dimension: 2,
        samples: 1,
        max_violation: v,
        worst_point: apex.to_vec(),
        pass: v <= INEQUALITY_SLACK,
    })
}
