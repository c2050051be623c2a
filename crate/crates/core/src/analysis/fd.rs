use crate::closed_forms::ClosedFormFunction;
use crate::error::{geometry, Result};
use crate::geometry::ConvexDomain;
use crate::linalg::det;
use crate::solver::{DiscreteSolution, Interpolator};

/// A scalar function on a convex domain.
pub trait Evaluable {
    fn domain(&self) -> &ConvexDomain;
    fn value(&self, x: &[f64]) -> Result<f64>;
}

impl Evaluable for ClosedFormFunction {
    fn domain(&self) -> &ConvexDomain {
        ClosedFormFunction::domain(self)
    }
    fn value(&self, x: &[f64]) -> Result<f64> {
        ClosedFormFunction::value(self, x)
    }
}

/// Interpolated discrete solution.
pub struct SolutionField<'a> {
    sol: &'a DiscreteSolution,
    interp: Interpolator<'a>,
}

impl<'a> SolutionField<'a> {
    pub fn new(sol: &'a DiscreteSolution) -> Result<Self> {
        Ok(SolutionField { sol, interp: sol.interpolator()? })
    }
}

impl Evaluable for SolutionField<'_> {
    fn domain(&self) -> &ConvexDomain {
        &self.sol.domain
    }
    fn value(&self, x: &[f64]) -> Result<f64> {
        self.interp.eval(x)
    }
}

/// A closure paired with its domain.
pub struct FnField<F> {
    pub domain: ConvexDomain,
    pub f: F,
}

impl<F: Fn(&[f64]) -> Result<f64>> Evaluable for FnField<F> {
    fn domain(&self) -> &ConvexDomain {
        &self.domain
    }
    fn value(&self, x: &[f64]) -> Result<f64> {
        (self.f)(x)
    }
}

fn check_stencil(f: &dyn Evaluable, x: &[f64], h: f64) -> Result<()> {
    let dom = f.domain();
    if !(h > 0.0) {
        return geometry("step must be positive");
    }
    let n = dom.dim();
    if x.len() != n || !dom.contains(x) || dom.dist_to_boundary(x)? < h * n as f64 {
        return geometry(format!("the stencil of radius {} around {x:?} leaves the domain", h * n as f64));
    }
    Ok(())
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(k, s) in moves {
        y[k] += s;
    }
    y
}

/// Central second-difference Hessian, row-major.
pub fn fd_hessian(f: &dyn Evaluable, x: &[f64], h: f64) -> Result<Vec<f64>> {
    check_stencil(f, x, h)?;
    let n = x.len();
    let f0 = f.value(x)?;
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        let p = f.value(&shifted(x, &[(i, h)]))?;
        let m = f.value(&shifted(x, &[(i, -h)]))?;
        a[i * n + i] = (p - 2.0 * f0 + m) / (h * h);
        for j in 0..i {
            let pp = f.value(&shifted(x, &[(i, h), (j, h)]))?;
            let pm = f.value(&shifted(x, &[(i, h), (j, -h)]))?;
            let mp = f.value(&shifted(x, &[(i, -h), (j, h)]))?;
            let mm = f.value(&shifted(x, &[(i, -h), (j, -h)]))?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
    Ok(a)
}

/// Determinant of the central second-difference Hessian.
pub fn fd_hessian_det(f: &dyn Evaluable, x: &[f64], h: f64) -> Result<f64> {
    let a = fd_hessian(f, x, h)?;
    Ok(det(&a, x.len()))
}

/// Central-difference gradient.
pub fn fd_gradient(f: &dyn Evaluable, x: &[f64], h: f64) -> Result<Vec<f64>> {
    check_stencil(f, x, h)?;
    (0..x.len())
        .map(|i| Ok((f.value(&shifted(x, &[(i, h)]))? - f.value(&shifted(x, &[(i, -h)]))?) / (2.0 * h)))
        .collect()
}

/// Forward difference `(f(x + s ν) − f(x)) / s`.
pub fn one_sided_derivative(f: &dyn Evaluable, x: &[f64], nu: &[f64], s: f64) -> Result<f64> {
    let y: Vec<f64> = x.iter().zip(nu).map(|(a, b)| a + s * b).collect();
    Ok((f.value(&y)? - f.value(x)?) / s)
}
