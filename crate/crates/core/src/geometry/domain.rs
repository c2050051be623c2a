use super::{axpy, dot, norm, sub};
use crate::error::{geometry, Error, Result};
use serde::{Deserialize, Serialize};

pub const DOMAIN_SCHEMA_VERSION: u32 = 1;

const MEMBER_TOL: f64 = 1e-12;

/// Analytic description of a domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Counter-clockwise vertex list of a convex polygon.
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    /// Axis-aligned box `[lo, hi]`.
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `{ |x'| < R, 0 < x_n < (R² − |x'|²)^s }`; convex only for `s ≤ 1`.
    Bowl {
        radius: f64,
        exponent: f64,
    },
}

/// A flat boundary piece. `normal` is the outward unit normal and the facet lies in
/// `normal · x = offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub id: usize,
    pub normal: Vec<f64>,
    pub offset: f64,
    pub vertices: Vec<Vec<f64>>,
    pub centroid: Vec<f64>,
    pub inradius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDomain {
    dim: usize,
    shape: Shape,
    facets: Vec<Facet>,
    flat_facet_id: Option<usize>,
}

impl ConvexDomain {
    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        if vertices.len() < 3 {
            return geometry("polygon needs at least 3 vertices");
        }
        let mut v = vertices.to_vec();
        let area2: f64 = (0..v.len())
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        if area2.abs() < 1e-14 {
            return geometry("polygon has zero area");
        }
        if area2 < 0.0 {
            v.reverse();
        }
        let m = v.len();
        for i in 0..m {
            let (a, b, c) = (v[i], v[(i + 1) % m], v[(i + 2) % m]);
            let turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if turn <= 1e-14 {
                return geometry(format!("polygon is not strictly convex at vertex {}", (i + 1) % m));
            }
        }
        let facets = (0..m)
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % m]);
                let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
                let len = (ex * ex + ey * ey).sqrt();
                let normal = vec![ey / len, -ex / len];
                Facet {
                    id: i,
                    offset: normal[0] * a[0] + normal[1] * a[1],
                    normal,
                    vertices: vec![a.to_vec(), b.to_vec()],
                    centroid: vec![(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0],
                    inradius: len / 2.0,
                }
            })
            .collect();
        Ok(ConvexDomain { dim: 2, shape: Shape::Polygon { vertices: v }, facets, flat_facet_id: None })
    }

    /// Facet `2k` is `x_k = lo_k`, facet `2k+1` is `x_k = hi_k`.
    pub fn cuboid(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let n = lo.len();
        if n < 2 || hi.len() != n {
            return geometry("box needs matching corners of dimension >= 2");
        }
        if lo.iter().zip(hi).any(|(a, b)| !(b > a)) {
            return geometry("box corners must satisfy lo < hi");
        }
        let mut facets = Vec::with_capacity(2 * n);
        for k in 0..n {
            for (side, sign) in [(0usize, -1.0), (1, 1.0)] {
                let mut normal = vec![0.0; n];
                normal[k] = sign;
                let fixed = if side == 0 { lo[k] } else { hi[k] };
                let mut vertices = Vec::new();
                for mask in 0..(1usize << (n - 1)) {
                    let mut p = vec![0.0; n];
                    let mut bit = 0;
                    for j in 0..n {
                        if j == k {
                            p[j] = fixed;
                        } else {
                            p[j] = if mask >> bit & 1 == 1 { hi[j] } else { lo[j] };
                            bit += 1;
                        }
                    }
                    vertices.push(p);
                }
                let mut centroid: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (a + b) / 2.0).collect();
                centroid[k] = fixed;
                let inradius = (0..n).filter(|&j| j != k).map(|j| (hi[j] - lo[j]) / 2.0).fold(f64::INFINITY, f64::min);
                facets.push(Facet { id: 2 * k + side, offset: sign * fixed, normal, vertices, centroid, inradius });
            }
        }
        Ok(ConvexDomain { dim: n, shape: Shape::Box { lo: lo.to_vec(), hi: hi.to_vec() }, facets, flat_facet_id: None })
    }

    pub fn unit_cube(n: usize) -> Result<Self> {
        Self::cuboid(&vec![0.0; n], &vec![1.0; n])
    }

    pub fn unit_square() -> Self {
        Self::cuboid(&[0.0, 0.0], &[1.0, 1.0]).expect("unit square")
    }

    /// The triangle with vertices (0,0), (1,0), (0,1); facet 0 is the bottom leg.
    pub fn lozenge_triangle() -> Self {
        Self::polygon(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).expect("triangle")
    }

    pub fn ball(center: &[f64], radius: f64) -> Result<Self> {
        if center.len() < 2 || !(radius > 0.0) {
            return geometry("ball needs dimension >= 2 and positive radius");
        }
        Ok(ConvexDomain {
            dim: center.len(),
            shape: Shape::Ball { center: center.to_vec(), radius },
            facets: Vec::new(),
            flat_facet_id: None,
        })
    }

    /// Bowl over the `(n−1)`-ball of radius `radius` with profile exponent `exponent`.
    /// Facet 0 is the flat base `x_n = 0`.
    pub fn bowl(dim: usize, radius: f64, exponent: f64) -> Result<Self> {
        if dim < 2 || !(radius > 0.0) || !(exponent > 0.0) {
            return geometry("bowl needs dimension >= 2, positive radius and exponent");
        }
        let mut normal = vec![0.0; dim];
        normal[dim - 1] = -1.0;
        let base =
            Facet { id: 0, normal, offset: 0.0, vertices: Vec::new(), centroid: vec![0.0; dim], inradius: radius };
        Ok(ConvexDomain { dim, shape: Shape::Bowl { radius, exponent }, facets: vec![base], flat_facet_id: Some(0) })
    }

    pub fn with_flat_facet(mut self, id: usize) -> Result<Self> {
        if id >= self.facets.len() {
            return geometry(format!("facet {id} does not exist"));
        }
        self.flat_facet_id = Some(id);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn flat_facet_id(&self) -> Option<usize> {
        self.flat_facet_id
    }

    pub fn facet(&self, id: usize) -> Result<&Facet> {
        self.facets.get(id).ok_or_else(|| Error::Geometry(format!("facet {id} does not exist")))
    }

    pub fn is_convex(&self) -> bool {
        match self.shape {
            Shape::Bowl { exponent, .. } => exponent <= 1.0,
            _ => true,
        }
    }

    /// True for polygons and boxes.
    pub fn is_polytope(&self) -> bool {
        matches!(self.shape, Shape::Polygon { .. } | Shape::Box { .. })
    }

    fn bowl_height(radius: f64, s: f64, r: f64) -> f64 {
        let t = radius * radius - r * r;
        if t <= 0.0 {
            0.0
        } else {
            t.powf(s)
        }
    }

    /// Signed slack of the defining constraints: positive inside, zero on the boundary.
    fn slack(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Polygon { .. } | Shape::Box { .. } => {
                self.facets.iter().map(|f| f.offset - dot(&f.normal, x)).fold(f64::INFINITY, f64::min)
            }
            Shape::Ball { center, radius } => radius - norm(&sub(x, center)),
            Shape::Bowl { radius, exponent } => {
                let n = self.dim;
                let r = norm(&x[..n - 1]);
                let xn = x[n - 1];
                let top = Self::bowl_height(*radius, *exponent, r) - xn;
                xn.min(radius - r).min(top)
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim && self.slack(x) > 0.0
    }

    /// Closed-domain membership with a small absolute tolerance.
    pub fn contains_closed(&self, x: &[f64]) -> bool {
        x.len() == self.dim && self.slack(x) >= -MEMBER_TOL
    }

    /// Euclidean distance to the boundary.
    pub fn dist_to_boundary(&self, x: &[f64]) -> Result<f64> {
        if !self.contains_closed(x) {
            return Err(Error::OutsideDomain { point: x.to_vec() });
        }
        Ok(match &self.shape {
            Shape::Polygon { .. } | Shape::Box { .. } | Shape::Ball { .. } => self.slack(x).max(0.0),
            Shape::Bowl { .. } => {
                let n = self.dim;
                let curved = self.bowl_nearest(x).1;
                x[n - 1].max(0.0).min(curved)
            }
        })
    }

    /// Nearest point of the curved bowl surface to `x`, as (point, distance).
    fn bowl_nearest(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let Shape::Bowl { radius, exponent } = self.shape else { unreachable!() };
        let n = self.dim;
        let r0 = norm(&x[..n - 1]);
        let z0 = x[n - 1];
        let (rho, d) = bowl_profile_nearest(radius, exponent, r0, z0);
        let mut p = vec![0.0; n];
        if r0 > 0.0 {
            for k in 0..n - 1 {
                p[k] = x[k] * rho / r0;
            }
        } else {
            p[0] = rho;
        }
        p[n - 1] = Self::bowl_height(radius, exponent, rho);
        (p, d)
    }

    /// Nearest boundary point and the inward unit normal there.
    pub fn nearest_boundary(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = self.dist_to_boundary(x)?;
        match &self.shape {
            Shape::Polygon { .. } | Shape::Box { .. } => {
                let f = self
                    .facets
                    .iter()
                    .min_by(|a, b| (a.offset - dot(&a.normal, x)).total_cmp(&(b.offset - dot(&b.normal, x))))
                    .expect("polytope has facets");
                let p = axpy(x, d, &f.normal);
                Ok((p, f.normal.iter().map(|v| -v).collect()))
            }
            Shape::Ball { center, radius } => {
                let v = sub(x, center);
                let r = norm(&v);
                if r < 1e-14 {
                    return geometry("nearest boundary point of the ball center is not unique");
                }
                let u: Vec<f64> = v.iter().map(|c| c / r).collect();
                Ok((axpy(center, *radius, &u), u.iter().map(|c| -c).collect()))
            }
            Shape::Bowl { .. } => {
                let n = self.dim;
                let (p, dc) = self.bowl_nearest(x);
                if x[n - 1] <= dc {
                    let mut p = x.to_vec();
                    p[n - 1] = 0.0;
                    let mut nu = vec![0.0; n];
                    nu[n - 1] = 1.0;
                    Ok((p, nu))
                } else {
                    let v = sub(x, &p);
                    let l = norm(&v);
                    if l < 1e-14 {
                        return geometry("point lies on the curved boundary");
                    }
                    Ok((p, v.iter().map(|c| c / l).collect()))
                }
            }
        }
    }

    /// Largest `t ≥ 0` with `x + t v` in the closed domain, for `x` inside.
    pub fn ray_exit(&self, x: &[f64], v: &[f64]) -> f64 {
        match &self.shape {
            Shape::Polygon { .. } | Shape::Box { .. } => {
                let mut t = f64::INFINITY;
                for f in &self.facets {
                    let nv = dot(&f.normal, v);
                    if nv > 0.0 {
                        t = t.min(((f.offset - dot(&f.normal, x)) / nv).max(0.0));
                    }
                }
                t
            }
            Shape::Ball { center, radius } => {
                let w = sub(x, center);
                let a = dot(v, v);
                let b = dot(&w, v);
                let c = dot(&w, &w) - radius * radius;
                let disc = (b * b - a * c).max(0.0);
                ((-b + disc.sqrt()) / a).max(0.0)
            }
            Shape::Bowl { .. } => {
                let mut hi = 1.0;
                while self.contains(&axpy(x, hi, v)) {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.contains(&axpy(x, mid, v)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-15 * hi.max(1.0) {
                        break;
                    }
                }
                lo
            }
        }
    }

    /// Axis-aligned bounding box as (lo, hi).
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let mut lo = vec![f64::INFINITY; 2];
                let mut hi = vec![f64::NEG_INFINITY; 2];
                for v in vertices {
                    for k in 0..2 {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                (lo, hi)
            }
            Shape::Box { lo, hi } => (lo.clone(), hi.clone()),
            Shape::Ball { center, radius } => {
                (center.iter().map(|c| c - radius).collect(), center.iter().map(|c| c + radius).collect())
            }
            Shape::Bowl { radius, exponent } => {
                let n = self.dim;
                let mut lo = vec![-radius; n];
                let mut hi = vec![*radius; n];
                lo[n - 1] = 0.0;
                hi[n - 1] = Self::bowl_height(*radius, *exponent, 0.0);
                (lo, hi)
            }
        }
    }

    /// An interior reference point.
    pub fn center(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let m = vertices.len() as f64;
                vec![vertices.iter().map(|v| v[0]).sum::<f64>() / m, vertices.iter().map(|v| v[1]).sum::<f64>() / m]
            }
            Shape::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| (a + b) / 2.0).collect(),
            Shape::Ball { center, .. } => center.clone(),
            Shape::Bowl { radius, exponent } => {
                let mut c = vec![0.0; self.dim];
                c[self.dim - 1] = Self::bowl_height(*radius, *exponent, 0.0) / 2.0;
                c
            }
        }
    }

    pub fn diam(&self) -> f64 {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let mut d: f64 = 0.0;
                for a in vertices {
                    for b in vertices {
                        d = d.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
                    }
                }
                d
            }
            Shape::Box { lo, hi } => norm(&sub(hi, lo)),
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Bowl { radius, exponent } => {
                // Farthest pairs sit on opposite meridians.
                let m = 400;
                let prof: Vec<(f64, f64)> = (0..=m)
                    .map(|i| {
                        let r = radius * i as f64 / m as f64;
                        (r, Self::bowl_height(*radius, *exponent, r))
                    })
                    .collect();
                let mut d: f64 = 0.0;
                for a in &prof {
                    for b in &prof {
                        d = d.max(((a.0 + b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt());
                    }
                }
                d
            }
        }
    }

    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let m = vertices.len();
                0.5 * (0..m)
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % m]);
                        a[0] * b[1] - a[1] * b[0]
                    })
                    .sum::<f64>()
            }
            Shape::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).product(),
            Shape::Ball { radius, .. } => unit_ball_volume(self.dim) * radius.powi(self.dim as i32),
            Shape::Bowl { radius, exponent } => {
                // Shell integration of the profile in |x'|.
                let k = self.dim - 1;
                let m = 20000;
                let h = radius / m as f64;
                let surf = k as f64 * unit_ball_volume(k);
                (0..m)
                    .map(|i| {
                        let r = (i as f64 + 0.5) * h;
                        surf * r.powi(k as i32 - 1) * Self::bowl_height(*radius, *exponent, r) * h
                    })
                    .sum()
            }
        }
    }

    /// True when `p` lies in the relative interior of facet `id`.
    pub fn in_facet_interior(&self, id: usize, p: &[f64]) -> Result<bool> {
        let f = self.facet(id)?;
        if (dot(&f.normal, p) - f.offset).abs() > 1e-12 {
            return Ok(false);
        }
        Ok(match &self.shape {
            Shape::Polygon { .. } => {
                let (a, b) = (&f.vertices[0], &f.vertices[1]);
                let e = sub(b, a);
                let t = dot(&sub(p, a), &e) / dot(&e, &e);
                t > 0.0 && t < 1.0
            }
            Shape::Box { lo, hi } => {
                let k = id / 2;
                (0..self.dim).filter(|&j| j != k).all(|j| p[j] > lo[j] && p[j] < hi[j])
            }
            Shape::Bowl { radius, .. } => norm(&p[..self.dim - 1]) < *radius,
            Shape::Ball { .. } => false,
        })
    }

    pub fn to_file(&self) -> DomainFile {
        let (kind, vertices, profile) = match &self.shape {
            Shape::Polygon { vertices } => ("polygon", Some(vertices.iter().map(|v| v.to_vec()).collect()), None),
            Shape::Box { lo, hi } => ("box", Some(vec![lo.clone(), hi.clone()]), None),
            Shape::Ball { center, radius } => {
                ("ball", None, Some(Profile { center: Some(center.clone()), radius: *radius, exponent: None }))
            }
            Shape::Bowl { radius, exponent } => {
                ("bowl", None, Some(Profile { center: None, radius: *radius, exponent: Some(*exponent) }))
            }
        };
        DomainFile {
            schema_version: DOMAIN_SCHEMA_VERSION,
            dimension: self.dim,
            kind: kind.to_string(),
            vertices,
            profile,
            flat_facet_id: self.flat_facet_id,
        }
    }

    pub fn from_file(f: &DomainFile) -> Result<Self> {
        if f.schema_version != DOMAIN_SCHEMA_VERSION {
            return Err(Error::Validation(format!("unsupported domain schema_version {}", f.schema_version)));
        }
        let d = match f.kind.as_str() {
            "polygon" => {
                let vs = f.vertices.as_ref().ok_or_else(|| Error::Validation("polygon needs vertices".into()))?;
                if f.dimension != 2 || vs.iter().any(|v| v.len() != 2) {
                    return Err(Error::Validation("polygon vertices must be 2D".into()));
                }
                Self::polygon(&vs.iter().map(|v| [v[0], v[1]]).collect::<Vec<_>>())?
            }
            "box" => {
                let vs =
                    f.vertices.as_ref().ok_or_else(|| Error::Validation("box needs two corner vertices".into()))?;
                if vs.len() != 2 || vs[0].len() != f.dimension || vs[1].len() != f.dimension {
                    return Err(Error::Validation("box needs [lo, hi] corners".into()));
                }
                Self::cuboid(&vs[0], &vs[1])?
            }
            "ball" | "disk" => {
                let p = f.profile.as_ref().ok_or_else(|| Error::Validation("ball needs a profile".into()))?;
                let c = p.center.clone().unwrap_or_else(|| vec![0.0; f.dimension]);
                if c.len() != f.dimension {
                    return Err(Error::Validation("ball center has wrong dimension".into()));
                }
                Self::ball(&c, p.radius)?
            }
            "bowl" => {
                let p = f.profile.as_ref().ok_or_else(|| Error::Validation("bowl needs a profile".into()))?;
                Self::bowl(f.dimension, p.radius, p.exponent.unwrap_or(1.0))?
            }
            other => return Err(Error::Validation(format!("unknown domain kind '{other}'"))),
        };
        match f.flat_facet_id {
            Some(id) => d.with_flat_facet(id),
            None => Ok(d),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: DomainFile = serde_json::from_str(s)?;
        Self::from_file(&f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("domain serializes")
    }
}

/// Volume of the unit ball in R^k.
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / k as f64 * unit_ball_volume(k - 2),
    }
}

/// Nearest point of the profile curve `z = (R² − ρ²)^s`, `0 ≤ ρ ≤ R`, to `(r0, z0)`.
/// Returns (ρ, distance).
fn bowl_profile_nearest(radius: f64, s: f64, r0: f64, z0: f64) -> (f64, f64) {
    let g = |r: f64| ConvexDomain::bowl_height(radius, s, r);
    let phi = |r: f64| (r - r0).powi(2) + (g(r) - z0).powi(2);
    // dphi/2 and d²phi/2 on the open interval.
    let dphi = |r: f64| {
        let t = radius * radius - r * r;
        let gp = -2.0 * s * r * t.powf(s - 1.0);
        (r - r0) + (g(r) - z0) * gp
    };
    let ddphi = |r: f64| {
        let t = radius * radius - r * r;
        let gp = -2.0 * s * r * t.powf(s - 1.0);
        let gpp = -2.0 * s * t.powf(s - 1.0) + 4.0 * s * (s - 1.0) * r * r * t.powf(s - 2.0);
        1.0 + gp * gp + (g(r) - z0) * gpp
    };
    let m = 256;
    let grid: Vec<f64> = (0..=m).map(|i| radius * i as f64 / m as f64).collect();
    let mut best = 0;
    for i in 1..=m {
        if phi(grid[i]) < phi(grid[best]) {
            best = i;
        }
    }
    let mut cands = vec![(grid[best], phi(grid[best]))];
    let lo_i = best.saturating_sub(1);
    let hi_i = (best + 1).min(m);
    let mut a = grid[lo_i];
    let mut b = grid[hi_i];
    // Keep the bracket inside the open interval where the derivatives are finite.
    let edge = radius * (1.0 - 1e-13);
    b = b.min(edge);
    a = a.min(b);
    let (fa, fb) = (dphi(a), dphi(b));
    if fa < 0.0 && fb > 0.0 {
        let (mut lo, mut hi) = (a, b);
        let mut r = 0.5 * (lo + hi);
        for _ in 0..200 {
            let d1 = dphi(r);
            if d1 == 0.0 {
                break;
            }
            if d1 < 0.0 {
                lo = r;
            } else {
                hi = r;
            }
            let d2 = ddphi(r);
            let newton = r - d1 / d2;
            r = if d2 > 0.0 && newton >= lo && newton <= hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-14 {
                break;
            }
        }
        cands.push((r, phi(r)));
    }
    cands.push((radius, phi(radius)));
    cands.push((0.0, phi(0.0)));
    let (rho, p2) = cands.into_iter().min_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
    (rho, p2.max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
}

/// On-disk domain description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainFile {
    pub schema_version: u32,
    pub dimension: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_facet_id: Option<usize>,
}
