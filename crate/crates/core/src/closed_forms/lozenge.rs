use super::lobachevsky::lobachevsky;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Strict membership in the open triangle with vertices (0,0), (1,0), (0,1).
pub fn in_lozenge_triangle(x: [f64; 2]) -> bool {
    x[0] > 0.0 && x[1] > 0.0 && x[0] + x[1] < 1.0
}

fn value_unchecked(x: [f64; 2]) -> f64 {
    -(lobachevsky(PI * x[0]) + lobachevsky(PI * x[1]) + lobachevsky(PI * (1.0 - x[0] - x[1]))) / (PI * PI)
}

/// Lozenge surface tension and its gradient in the open triangle.
pub fn surface_tension_t(x: [f64; 2]) -> Result<(f64, [f64; 2])> {
    if !in_lozenge_triangle(x) {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    let s = (PI * (x[0] + x[1])).sin();
    let g = [((PI * x[0]).sin() / s).ln() / PI, ((PI * x[1]).sin() / s).ln() / PI];
    Ok((value_unchecked(x), g))
}

/// Value on the closed triangle, extended by its boundary limit 0.
pub fn surface_tension_t_closure(x: [f64; 2]) -> Result<f64> {
    let tol = 1e-15;
    if x[0] < -tol || x[1] < -tol || x[0] + x[1] > 1.0 + tol {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    if !in_lozenge_triangle(x) {
        return Ok(0.0);
    }
    Ok(value_unchecked(x))
}

/// Closed-form Hessian; its determinant is identically 1.
pub fn surface_tension_t_hessian(x: [f64; 2]) -> Result<[[f64; 2]; 2]> {
    if !in_lozenge_triangle(x) {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    let cot = |t: f64| t.cos() / t.sin();
    let (ca, cb, cs) = (cot(PI * x[0]), cot(PI * x[1]), cot(PI * (x[0] + x[1])));
    Ok([[ca - cs, -cs], [-cs, cb - cs]])
}
