use super::axpy;
use crate::error::{geometry, Result};
use crate::geometry::ConvexDomain;

/// Points `anchor + d_j ν`, `d_j = d0 · 2^{−j}`, along the inward normal of a facet.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalProbe {
    pub facet_id: usize,
    pub anchor: Vec<f64>,
    pub normal: Vec<f64>,
    pub distances: Vec<f64>,
}

impl NormalProbe {
    pub fn points(&self) -> Vec<Vec<f64>> {
        self.distances.iter().map(|d| axpy(&self.anchor, *d, &self.normal)).collect()
    }
}

/// Probe anchored at the facet centroid, `levels + 1` points.
pub fn normal_probe(domain: &ConvexDomain, facet_id: usize, levels: usize, d0: f64) -> Result<NormalProbe> {
    let anchor = domain.facet(facet_id)?.centroid.clone();
    normal_probe_at(domain, facet_id, &anchor, levels, d0, 1.0)
}

/// Probe from an explicit anchor; `d0` must stay below `max_fraction` times the facet inradius.
pub fn normal_probe_at(
    domain: &ConvexDomain,
    facet_id: usize,
    anchor: &[f64],
    levels: usize,
    d0: f64,
    max_fraction: f64,
) -> Result<NormalProbe> {
    let f = domain.facet(facet_id)?;
    if !(d0 > 0.0) || !d0.is_finite() {
        return geometry("probe d0 must be positive and finite");
    }
    if anchor.len() != domain.dim() || !domain.in_facet_interior(facet_id, anchor)? {
        return geometry(format!("anchor {anchor:?} is not in the relative interior of facet {facet_id}"));
    }
    let normal: Vec<f64> = f.normal.iter().map(|v| -v).collect();
    let distances: Vec<f64> = (0..=levels).map(|j| d0 * 0.5f64.powi(j as i32)).collect();
    for (j, d) in distances.iter().enumerate() {
        if !domain.contains(&axpy(anchor, *d, &normal)) {
            return geometry(format!("probe point j = {j} (d = {d}) escapes the domain"));
        }
    }
    if d0 > max_fraction * f.inradius {
        return geometry(format!("d0 = {d0} exceeds {max_fraction} x facet inradius {}", f.inradius));
    }
    Ok(NormalProbe { facet_id, anchor: anchor.to_vec(), normal, distances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn triangle_leg_probe() {
        let t = ConvexDomain::lozenge_triangle();
        let p = normal_probe_at(&t, 0, &[0.5, 0.0], 3, 0.1, 1.0).unwrap();
        let pts = p.points();
        let want = [0.1, 0.05, 0.025, 0.0125];
        for (q, w) in pts.iter().zip(want) {
            assert_eq!(q[0], 0.5);
            assert!((q[1] - w).abs() < 1e-16);
        }
    }

    #[test]
    fn cube_probe_and_escape() {
        let c = ConvexDomain::unit_cube(3).unwrap();
        let p = normal_probe(&c, 4, 4, 0.2).unwrap();
        for (q, d) in p.points().iter().zip(&p.distances) {
            assert_eq!(&q[..2], &[0.5, 0.5]);
            assert!((q[2] - d).abs() < 1e-16);
        }
        match normal_probe(&c, 4, 3, 2.0) {
            Err(Error::Geometry(m)) => assert!(m.contains("j = 0")),
            other => panic!("{other:?}"),
        }
    }
}
