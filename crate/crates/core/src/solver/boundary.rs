use crate::error::{param, Result};
use crate::geometry::{ConvexDomain, Shape};
use serde::{Deserialize, Serialize};

/// Dirichlet data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryData {
    #[default]
    Zero,
    /// One value per polygon vertex, affine along each edge.
    VertexAffine { values: Vec<f64> },
}

/// Counter-clockwise corners of a planar polytope.
pub(crate) fn polygon_vertices(domain: &ConvexDomain) -> Option<Vec<[f64; 2]>> {
    match domain.shape() {
        Shape::Polygon { vertices } => Some(vertices.clone()),
        Shape::Box { lo, hi } if lo.len() == 2 => {
            Some(vec![[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])
        }
        _ => None,
    }
}

impl BoundaryData {
    pub fn is_zero(&self) -> bool {
        match self {
            BoundaryData::Zero => true,
            BoundaryData::VertexAffine { values } => values.iter().all(|v| *v == 0.0),
        }
    }

    pub fn check(&self, domain: &ConvexDomain) -> Result<()> {
        if let BoundaryData::VertexAffine { values } = self {
            let Some(v) = polygon_vertices(domain) else {
                return param("vertex-affine data needs a polygonal domain");
            };
            if v.len() != values.len() {
                return param(format!("{} boundary values for {} vertices", values.len(), v.len()));
            }
            if values.iter().any(|x| !x.is_finite()) {
                return param("boundary values must be finite");
            }
        }
        Ok(())
    }

    /// Value at a boundary point (projected onto the nearest edge).
    pub fn value(&self, domain: &ConvexDomain, x: &[f64]) -> f64 {
        let BoundaryData::VertexAffine { values } = self else {
            return 0.0;
        };
        let Some(v) = polygon_vertices(domain) else {
            return 0.0;
        };
        let m = v.len();
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..m {
            let (a, b) = (v[k], v[(k + 1) % m]);
            let e = [b[0] - a[0], b[1] - a[1]];
            let l2 = e[0] * e[0] + e[1] * e[1];
            let t = (((x[0] - a[0]) * e[0] + (x[1] - a[1]) * e[1]) / l2).clamp(0.0, 1.0);
            let d = (x[0] - a[0] - t * e[0]).hypot(x[1] - a[1] - t * e[1]);
            if d < best.0 {
                best = (d, (1.0 - t) * values[k] + t * values[(k + 1) % m]);
            }
        }
        best.1
    }
}
