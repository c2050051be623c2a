use super::boundary::polygon_vertices;
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Shape};

/// Interior lattice points closer than this many mesh widths to the boundary are dropped.
pub const INTERIOR_GAP: f64 = 0.5;

/// Planar node set: lattice points inside, plus boundary samples at spacing about `h`.
#[derive(Debug, Clone)]
pub struct PlanarNodes {
    pub points: Vec<[f64; 2]>,
    pub boundary: Vec<bool>,
}

impl PlanarNodes {
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.points.len()).filter(|&i| !self.boundary[i])
    }
}

pub fn planar_nodes(domain: &ConvexDomain, h: f64) -> Result<PlanarNodes> {
    if domain.dim() != 2 {
        return Err(Error::Unsupported("the geometric backend is planar".into()));
    }
    let mut points = Vec::new();
    if let Some(v) = polygon_vertices(domain) {
        let m = v.len();
        for k in 0..m {
            let (a, b) = (v[k], v[(k + 1) % m]);
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let s = (len / h - 1e-9).ceil().max(1.0) as usize;
            for i in 0..s {
                let t = i as f64 / s as f64;
                points.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
    } else if let Shape::Ball { center, radius } = domain.shape() {
        let s = (2.0 * std::f64::consts::PI * radius / h).ceil().max(8.0) as usize;
        for i in 0..s {
            let t = 2.0 * std::f64::consts::PI * i as f64 / s as f64;
            points.push([center[0] + radius * t.cos(), center[1] + radius * t.sin()]);
        }
    } else {
        return Err(Error::Unsupported(format!("no planar mesher for a {} domain", domain.shape().kind_name())));
    }
    let nb = points.len();
    let (lo, hi) = domain.bounding_box();
    let cols = ((hi[0] - lo[0]) / h + 1e-9).floor() as usize;
    let rows = ((hi[1] - lo[1]) / h + 1e-9).floor() as usize;
    for j in 1..=rows {
        for i in 1..=cols {
            let p = [lo[0] + i as f64 * h, lo[1] + j as f64 * h];
            if domain.contains(&p) && domain.dist_to_boundary(&p)? >= INTERIOR_GAP * h {
                points.push(p);
            }
        }
    }
    let mut boundary = vec![true; nb];
    boundary.resize(points.len(), false);
    Ok(PlanarNodes { points, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lattice() {
        let n = planar_nodes(&ConvexDomain::unit_square(), 0.25).unwrap();
        assert_eq!(n.boundary.iter().filter(|b| **b).count(), 16);
        assert_eq!(n.interior().count(), 9);
    }

    #[test]
    fn disk_nodes_inside() {
        let d = ConvexDomain::ball(&[0.0, 0.0], 1.0).unwrap();
        let n = planar_nodes(&d, 0.1).unwrap();
        for i in n.interior() {
            assert!(d.dist_to_boundary(&n.points[i]).unwrap() >= 0.05);
        }
        assert!(n.interior().count() > 250);
    }
}
