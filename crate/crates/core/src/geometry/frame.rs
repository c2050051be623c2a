use super::{dot, norm, sub};
use crate::error::{geometry, Result};
use crate::geometry::ConvexDomain;

/// Rigid motion placing a boundary point at the origin with `x_n` pointing inward.
/// Local coordinates of `x` are `axes · (x − origin)`; the last axis is the inward normal.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFrame {
    pub origin: Vec<f64>,
    pub axes: Vec<Vec<f64>>,
}

impl LocalFrame {
    pub fn identity(n: usize) -> Self {
        let axes = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        LocalFrame { origin: vec![0.0; n], axes }
    }

    /// Frame at `origin` with inward unit normal `nu`; tangential axes by Gram-Schmidt.
    pub fn from_normal(origin: &[f64], nu: &[f64]) -> Result<Self> {
        let n = origin.len();
        let l = norm(nu);
        if !(l > 0.0) || nu.len() != n {
            return geometry("frame normal must be a nonzero vector of the right dimension");
        }
        let en: Vec<f64> = nu.iter().map(|v| v / l).collect();
        let mut axes: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut basis = vec![en.clone()];
        for k in 0..n {
            if axes.len() == n - 1 {
                break;
            }
            let mut v: Vec<f64> = (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect();
            for b in &basis {
                let c = dot(&v, b);
                for j in 0..n {
                    v[j] -= c * b[j];
                }
            }
            let lv = norm(&v);
            if lv > 1e-8 {
                let v: Vec<f64> = v.iter().map(|c| c / lv).collect();
                basis.push(v.clone());
                axes.push(v);
            }
        }
        axes.push(en);
        Ok(LocalFrame { origin: origin.to_vec(), axes })
    }

    /// Frame at the nearest boundary point to the probe `z`, so that `z` lies on the
    /// positive `x_n`-axis.
    pub fn from_probe(domain: &ConvexDomain, z: &[f64]) -> Result<Self> {
        let (y0, nu) = domain.nearest_boundary(z)?;
        if norm(&sub(z, &y0)) < 1e-14 {
            return geometry("probe point lies on the boundary");
        }
        Self::from_normal(&y0, &nu)
    }

    pub fn to_local(&self, x: &[f64]) -> Vec<f64> {
        let d = sub(x, &self.origin);
        self.axes.iter().map(|a| dot(a, &d)).collect()
    }

    pub fn to_global(&self, y: &[f64]) -> Vec<f64> {
        let mut x = self.origin.clone();
        for (a, c) in self.axes.iter().zip(y) {
            for j in 0..x.len() {
                x[j] += c * a[j];
            }
        }
        x
    }

    /// Rotate a local vector (e.g. a gradient) into global coordinates.
    pub fn vec_to_global(&self, v: &[f64]) -> Vec<f64> {
        let n = self.origin.len();
        let mut out = vec![0.0; n];
        for (a, c) in self.axes.iter().zip(v) {
            for j in 0..n {
                out[j] += c * a[j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_frame_puts_z_on_axis() {
        let sq = ConvexDomain::unit_square();
        let f = LocalFrame::from_probe(&sq, &[0.8, 0.6]).unwrap();
        let y = f.to_local(&[0.8, 0.6]);
        assert!(y[0].abs() < 1e-15 && (y[1] - 0.2).abs() < 1e-15);
        let back = f.to_global(&y);
        assert!((back[0] - 0.8).abs() < 1e-15 && (back[1] - 0.6).abs() < 1e-15);
        let ball = ConvexDomain::ball(&[0.0, 0.0, 0.0], 1.0).unwrap();
        let f = LocalFrame::from_probe(&ball, &[0.0, 0.3, 0.4]).unwrap();
        let y = f.to_local(&[0.0, 0.3, 0.4]);
        assert!(y[0].abs() < 1e-14 && y[1].abs() < 1e-14 && (y[2] - 0.5).abs() < 1e-14);
    }
}
