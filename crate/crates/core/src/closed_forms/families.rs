use super::lozenge::{surface_tension_t, surface_tension_t_closure, surface_tension_t_hessian};
use crate::error::{param, Error, Result};
use crate::geometry::{conical_apex_area, ConvexDomain, LocalFrame, Shape};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    PnWitness,
    NegPowerSuper,
    PosPowerSuper,
    HolderSub,
    LogLipschitzSub,
    AbreuComparison,
    Conical,
    SurfaceTensionT,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::PnWitness,
        Family::NegPowerSuper,
        Family::PosPowerSuper,
        Family::HolderSub,
        Family::LogLipschitzSub,
        Family::AbreuComparison,
        Family::Conical,
        Family::SurfaceTensionT,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::PnWitness => "pn-witness",
            Family::NegPowerSuper => "neg-power-super",
            Family::PosPowerSuper => "pos-power-super",
            Family::HolderSub => "holder-sub",
            Family::LogLipschitzSub => "log-lipschitz-sub",
            Family::AbreuComparison => "abreu-comparison",
            Family::Conical => "conical",
            Family::SurfaceTensionT => "surface-tension-t",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.tag().replace('-', "") == key || format!("{f:?}").to_lowercase() == key)
            .ok_or_else(|| Error::Validation(format!("unknown family '{s}'")))
    }
}

/// Parameters and the derived constants of each family.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    PnWitness { p: f64, a: f64, b: f64 },
    NegPowerSuper { p: f64, a: f64, b: f64, c: f64 },
    PosPowerSuper { gamma: f64, alpha: f64, m: f64, t: f64 },
    HolderSub { gamma: f64, alpha: f64, m: f64, diam: f64, k: f64 },
    LogLipschitzSub { m: f64, diam: f64 },
    AbreuComparison { alpha: f64, diam: f64, c_alpha: f64 },
    Conical { apex: [f64; 2], mass: f64, apex_area: f64, scale: f64 },
    SurfaceTensionT,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian_det: f64,
}

/// One explicit function together with its natural domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormFunction {
    family: Family,
    n: usize,
    params: FamilyParams,
    domain: ConvexDomain,
    frame: LocalFrame,
}

fn frame_for(domain: &ConvexDomain, probe: Option<&[f64]>) -> Result<LocalFrame> {
    let z = match probe {
        Some(z) => z.to_vec(),
        None => {
            // Default probe: a quarter of the way from the first flat facet to the center.
            let c = domain.center();
            let f = domain
                .facets()
                .first()
                .ok_or_else(|| Error::Geometry("domain has no flat facet for the default probe".into()))?;
            let k = domain.flat_facet_id().unwrap_or(f.id);
            let g = &domain.facets()[k].centroid;
            g.iter().zip(&c).map(|(a, b)| a + 0.25 * (b - a)).collect()
        }
    };
    if !domain.contains(&z) {
        return Err(Error::OutsideDomain { point: z });
    }
    LocalFrame::from_probe(domain, &z)
}

fn require_convex(domain: &ConvexDomain) -> Result<()> {
    if !domain.is_convex() {
        return param("the comparison families need a convex domain");
    }
    Ok(())
}

impl ClosedFormFunction {
    /// `w = x_n − x_n^a (1−|x'|²)^b`, `a = 2/(n+p)`, `b = 1 − a`, on the bowl `x_n < 1 − |x'|²`.
    pub fn pn_witness(n: usize, p: f64) -> Result<Self> {
        let nf = n as f64;
        // The function itself is fine at p = n; only its total mass diverges there.
        if n < 2 || !(p > 0.0 && p <= nf) {
            return param(format!("pn-witness needs n >= 2 and 0 < p <= n (p = {p})"));
        }
        let a = 2.0 / (nf + p);
        Ok(ClosedFormFunction {
            family: Family::PnWitness,
            n,
            params: FamilyParams::PnWitness { p, a, b: 1.0 - a },
            domain: ConvexDomain::bowl(n, 1.0, 1.0)?,
            frame: LocalFrame::identity(n),
        })
    }

    /// `w = [x_n − x_n^a (1−|x'|²)^b]/2` on `x_n < (1−|x'|²)^{n/(n+p−2)}`.
    pub fn neg_power_super(n: usize, p: f64) -> Result<Self> {
        let nf = n as f64;
        if n < 2 || !(p > 0.0) || !p.is_finite() {
            return param(format!("neg-power-super needs n >= 2 and p > 0 (p = {p})"));
        }
        Ok(ClosedFormFunction {
            family: Family::NegPowerSuper,
            n,
            params: FamilyParams::NegPowerSuper { p, a: 2.0 / (nf + p), b: nf / (nf + p), c: 0.5 },
            domain: ConvexDomain::bowl(n, 1.0, nf / (nf + p - 2.0))?,
            frame: LocalFrame::identity(n),
        })
    }

    /// `v = x_n + x_n^α (|x'|² − t²)` with `α = (2+γ)/n`; `t` defaults to `2^{−n/2} m^{1/2}`.
    pub fn pos_power_super(n: usize, gamma: f64, m: f64, t: Option<f64>) -> Result<Self> {
        let nf = n as f64;
        if n < 3 || !(gamma >= 0.0 && gamma < nf - 2.0) || !(m > 0.0) {
            return param(format!("pos-power-super needs n >= 3, 0 <= gamma < n-2, m > 0 (gamma = {gamma})"));
        }
        let bound = 2f64.powf(-nf / 2.0) * m.sqrt();
        let t = t.unwrap_or(bound);
        if !(t > 0.0 && t <= bound * (1.0 + 1e-15)) {
            return param(format!("t = {t} must lie in (0, {bound}]"));
        }
        let alpha = (2.0 + gamma) / nf;
        Ok(ClosedFormFunction {
            family: Family::PosPowerSuper,
            n,
            params: FamilyParams::PosPowerSuper { gamma, alpha, m, t },
            domain: ConvexDomain::bowl(n, t, 1.0 / (1.0 - alpha))?,
            frame: LocalFrame::identity(n),
        })
    }

    /// `w = x_n + x_n^α (|x'|² − K)` in the frame at the boundary point nearest to `probe`.
    pub fn holder_sub(domain: ConvexDomain, probe: Option<&[f64]>, gamma: f64, m: f64) -> Result<Self> {
        let n = domain.dim();
        let nf = n as f64;
        require_convex(&domain)?;
        if n < 3 || !(gamma >= 0.0 && gamma < nf - 2.0) || !(m > 0.0) {
            return param(format!("holder-sub needs n >= 3, 0 <= gamma < n-2, M > 0 (gamma = {gamma})"));
        }
        let alpha = (2.0 + gamma) / nf;
        let diam = domain.diam();
        let k = (2.0 * diam * diam + m + 1.0) / (alpha * (1.0 - alpha));
        let frame = frame_for(&domain, probe)?;
        Ok(ClosedFormFunction {
            family: Family::HolderSub,
            n,
            params: FamilyParams::HolderSub { gamma, alpha, m, diam, k },
            domain,
            frame,
        })
    }

    /// `v = (M+2D²) x_n log(x_n/D) + x_n(|x'|² − D²)` in the probe frame.
    pub fn log_lipschitz_sub(domain: ConvexDomain, probe: Option<&[f64]>, m: f64) -> Result<Self> {
        require_convex(&domain)?;
        if !(m > 0.0) {
            return param("log-lipschitz-sub needs M > 0");
        }
        let diam = domain.diam();
        let frame = frame_for(&domain, probe)?;
        Ok(ClosedFormFunction {
            family: Family::LogLipschitzSub,
            n: domain.dim(),
            params: FamilyParams::LogLipschitzSub { m, diam },
            domain,
            frame,
        })
    }

    /// `v_α = x_n^α (|x'|² − C_α)` for `α < 1`, and the log-Lipschitz form with `M = 1` at `α = 1`.
    pub fn abreu_comparison(domain: ConvexDomain, probe: Option<&[f64]>, alpha: f64) -> Result<Self> {
        require_convex(&domain)?;
        let n = domain.dim();
        let lo = 2.0 / n as f64;
        if !(alpha >= lo - 1e-15 && alpha <= 1.0) {
            return param(format!("alpha = {alpha} must lie in [2/n, 1]"));
        }
        let diam = domain.diam();
        let c_alpha = if alpha < 1.0 { (1.0 + 2.0 * diam * diam) / (alpha * (1.0 - alpha)) } else { 0.0 };
        let frame = frame_for(&domain, probe)?;
        Ok(ClosedFormFunction {
            family: Family::AbreuComparison,
            n,
            params: FamilyParams::AbreuComparison { alpha, diam, c_alpha },
            domain,
            frame,
        })
    }

    /// `a Ĉ_{q,N}` with `Ĉ` the cone of height −1 over `q` and `a² |∂Ĉ(q)| = mass`.
    pub fn conical(domain: ConvexDomain, apex: [f64; 2], mass: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return param("conical mass must be positive");
        }
        let apex_area = conical_apex_area(&domain, apex)?;
        Ok(ClosedFormFunction {
            family: Family::Conical,
            n: 2,
            params: FamilyParams::Conical { apex, mass, apex_area, scale: (mass / apex_area).sqrt() },
            domain,
            frame: LocalFrame::identity(2),
        })
    }

    pub fn surface_tension_t() -> Self {
        ClosedFormFunction {
            family: Family::SurfaceTensionT,
            n: 2,
            params: FamilyParams::SurfaceTensionT,
            domain: ConvexDomain::lozenge_triangle(),
            frame: LocalFrame::identity(2),
        }
    }

    /// Build from a family tag and `k=v` parameters with documented defaults.
    pub fn from_params(family: Family, n: usize, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |k: &str| params.get(k).copied();
        let need = |k: &str| get(k).ok_or_else(|| Error::Validation(format!("missing parameter '{k}'")));
        let known: &[&str] = match family {
            Family::PnWitness | Family::NegPowerSuper => &["p"],
            Family::PosPowerSuper => &["gamma", "m", "t"],
            Family::HolderSub => &["gamma", "M", "side"],
            Family::LogLipschitzSub => &["M", "side"],
            Family::AbreuComparison => &["alpha", "side"],
            Family::Conical => &["c", "qx", "qy"],
            Family::SurfaceTensionT => &[],
        };
        if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::Validation(format!("parameter '{k}' is not used by {family}")));
        }
        let cube = |side: f64| ConvexDomain::cuboid(&vec![0.0; n], &vec![side; n]);
        match family {
            Family::PnWitness => Self::pn_witness(n, need("p")?),
            Family::NegPowerSuper => Self::neg_power_super(n, need("p")?),
            Family::PosPowerSuper => {
                Self::pos_power_super(n, get("gamma").unwrap_or(0.0), get("m").unwrap_or(1.0), get("t"))
            }
            Family::HolderSub => Self::holder_sub(
                cube(get("side").unwrap_or(1.0))?,
                None,
                get("gamma").unwrap_or(0.0),
                get("M").unwrap_or(1.0),
            ),
            Family::LogLipschitzSub => {
                Self::log_lipschitz_sub(cube(get("side").unwrap_or(1.0))?, None, get("M").unwrap_or(1.0))
            }
            Family::AbreuComparison => Self::abreu_comparison(cube(get("side").unwrap_or(1.0))?, None, need("alpha")?),
            Family::Conical => {
                if n != 2 {
                    return param("conical functions are planar");
                }
                Self::conical(
                    ConvexDomain::unit_square(),
                    [get("qx").unwrap_or(0.5), get("qy").unwrap_or(0.5)],
                    get("c").unwrap_or(0.5),
                )
            }
            Family::SurfaceTensionT => {
                if n != 2 {
                    return param("the lozenge surface tension is planar");
                }
                Ok(Self::surface_tension_t())
            }
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn domain(&self) -> &ConvexDomain {
        &self.domain
    }

    pub fn frame(&self) -> &LocalFrame {
        &self.frame
    }

    fn check_point(&self, x: &[f64], closed: bool) -> Result<()> {
        let ok = if closed { self.domain.contains_closed(x) } else { self.domain.contains(x) };
        if x.len() != self.n || !ok {
            return Err(Error::OutsideDomain { point: x.to_vec() });
        }
        Ok(())
    }

    /// Value on the closed natural domain (boundary limits included).
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x, true)?;
        if let FamilyParams::SurfaceTensionT = self.params {
            return surface_tension_t_closure([x[0], x[1]]);
        }
        let y = self.frame.to_local(x);
        Ok(self.local(&y, false).0)
    }

    /// Value, gradient and closed-form Hessian determinant at an interior point.
    pub fn eval(&self, x: &[f64]) -> Result<Evaluation> {
        self.check_point(x, false)?;
        if let FamilyParams::SurfaceTensionT = self.params {
            let (v, g) = surface_tension_t([x[0], x[1]])?;
            let h = surface_tension_t_hessian([x[0], x[1]])?;
            return Ok(Evaluation {
                value: v,
                gradient: g.to_vec(),
                hessian_det: h[0][0] * h[1][1] - h[0][1] * h[1][0],
            });
        }
        let y = self.frame.to_local(x);
        let (value, g, det) = self.local(&y, true);
        Ok(Evaluation { value, gradient: self.frame.vec_to_global(&g), hessian_det: det })
    }

    /// (value, local gradient, det) in local coordinates.
    fn local(&self, y: &[f64], derivs: bool) -> (f64, Vec<f64>, f64) {
        let n = self.n;
        let xn = y[n - 1];
        match self.params {
            FamilyParams::PnWitness { a, b, .. } => bowl_power(n, 1.0, a, b, y, derivs),
            FamilyParams::NegPowerSuper { a, b, c, .. } => {
                let (v, g, d) = bowl_power(n, c, a, b, y, derivs);
                // w = C x_n + v with v = −C x_n^a s^b.
                let mut g = g;
                if derivs {
                    g[n - 1] -= 1.0 - c;
                }
                (v - (1.0 - c) * xn, g, d)
            }
            FamilyParams::PosPowerSuper { alpha, t, .. } => {
                let (v, mut g, d) = power_quadratic(n, alpha, t * t, y, derivs);
                if derivs {
                    g[n - 1] += 1.0;
                }
                (xn + v, g, d)
            }
            FamilyParams::HolderSub { alpha, k, .. } => {
                let (v, mut g, d) = power_quadratic(n, alpha, k, y, derivs);
                if derivs {
                    g[n - 1] += 1.0;
                }
                (xn + v, g, d)
            }
            FamilyParams::LogLipschitzSub { m, diam } => log_lipschitz(n, m, diam, y, derivs),
            FamilyParams::AbreuComparison { alpha, diam, c_alpha } => {
                if alpha < 1.0 {
                    power_quadratic(n, alpha, c_alpha, y, derivs)
                } else {
                    log_lipschitz(n, 1.0, diam, y, derivs)
                }
            }
            FamilyParams::Conical { apex, scale, .. } => {
                let (v, grad) = self.cone(y, apex);
                (scale * v, vec![scale * grad[0], scale * grad[1]], 0.0)
            }
            FamilyParams::SurfaceTensionT => unreachable!("handled by the caller"),
        }
    }

    fn cone(&self, x: &[f64], apex: [f64; 2]) -> (f64, [f64; 2]) {
        let mut best = f64::NEG_INFINITY;
        let mut grad = [0.0; 2];
        for f in self.domain.facets() {
            let h = f.offset - f.normal[0] * apex[0] - f.normal[1] * apex[1];
            let v = (f.normal[0] * x[0] + f.normal[1] * x[1] - f.offset) / h;
            if v > best {
                best = v;
                grad = [f.normal[0] / h, f.normal[1] / h];
            }
        }
        (best, grad)
    }

    /// Distance to the boundary of the natural domain.
    pub fn dist(&self, x: &[f64]) -> Result<f64> {
        self.domain.dist_to_boundary(x)
    }

    /// Both sides `(lhs, rhs)` of each defining inequality `lhs ≤ rhs` at `x`.
    pub fn inequality_sides(&self, x: &[f64]) -> Result<Vec<(f64, f64)>> {
        let e = self.eval(x)?;
        let n = self.n;
        let y = self.frame.to_local(x);
        let xn = y[n - 1];
        let nf = n as f64;
        Ok(match self.params {
            FamilyParams::PnWitness { .. } => vec![(-e.hessian_det, 0.0), (e.value, 0.0)],
            FamilyParams::NegPowerSuper { p, .. } => vec![(e.hessian_det, e.value.abs().powf(-p))],
            FamilyParams::PosPowerSuper { gamma, m, .. } => vec![(e.hessian_det, m * xn.powf(gamma) / 4.0)],
            FamilyParams::HolderSub { alpha, m, .. } => {
                vec![((m + 1.0) * xn.powf(nf * alpha - 2.0), e.hessian_det)]
            }
            FamilyParams::LogLipschitzSub { m, .. } => {
                vec![(2.0 * m * self.dist(x)?.powf(nf - 2.0), e.hessian_det)]
            }
            FamilyParams::AbreuComparison { alpha, .. } => {
                vec![(self.dist(x)?.powf(nf * alpha - 2.0), e.hessian_det)]
            }
            FamilyParams::Conical { .. } | FamilyParams::SurfaceTensionT => {
                return Err(Error::Unsupported(format!("{} has no pointwise inequality", self.family)))
            }
        })
    }
}

/// `−C x_n^a s^b` with `s = R² − |x'|²`, `R = 1`, plus its gradient and Hessian determinant.
fn bowl_power(n: usize, c: f64, a: f64, b: f64, y: &[f64], derivs: bool) -> (f64, Vec<f64>, f64) {
    let xn = y[n - 1];
    let r2: f64 = y[..n - 1].iter().map(|v| v * v).sum();
    let s = 1.0 - r2;
    let xa = if xn > 0.0 { xn.powf(a) } else { 0.0 };
    let sb = if s > 0.0 { s.powf(b) } else { 0.0 };
    // PnWitness has the unit coefficient on x_n; NegPowerSuper shifts it afterwards.
    let value = xn - c * xa * sb;
    if !derivs {
        return (value, Vec::new(), 0.0);
    }
    let nf = n as f64;
    let mut g = vec![0.0; n];
    for i in 0..n - 1 {
        g[i] = 2.0 * b * c * xa * s.powf(b - 1.0) * y[i];
    }
    g[n - 1] = 1.0 - a * c * xn.powf(a - 1.0) * sb;
    let det = c.powi(n as i32)
        * (2.0 * b).powi(n as i32 - 1)
        * xn.powf(nf * a - 2.0)
        * s.powf(nf * (b - 1.0))
        * a
        * (1.0 - a + (1.0 - 2.0 * b - a) * r2);
    (value, g, det)
}

/// `x_n^α (|x'|² − K)`; `det = 2^{n−1} x_n^{nα−2} [α(1−α)K − (α²+α)|x'|²]`.
fn power_quadratic(n: usize, alpha: f64, k: f64, y: &[f64], derivs: bool) -> (f64, Vec<f64>, f64) {
    let xn = y[n - 1];
    let r2: f64 = y[..n - 1].iter().map(|v| v * v).sum();
    let xa = if xn > 0.0 { xn.powf(alpha) } else { 0.0 };
    let value = xa * (r2 - k);
    if !derivs {
        return (value, Vec::new(), 0.0);
    }
    let mut g = vec![0.0; n];
    for i in 0..n - 1 {
        g[i] = 2.0 * xa * y[i];
    }
    g[n - 1] = alpha * xn.powf(alpha - 1.0) * (r2 - k);
    let det = 2f64.powi(n as i32 - 1)
        * xn.powf(n as f64 * alpha - 2.0)
        * (alpha * (1.0 - alpha) * k - (alpha * alpha + alpha) * r2);
    (value, g, det)
}

/// `(M+2D²) x_n log(x_n/D) + x_n(|x'|² − D²)`; `det = 2^{n−1} x_n^{n−2} (M + 2D² − 2|x'|²)`.
fn log_lipschitz(n: usize, m: f64, d: f64, y: &[f64], derivs: bool) -> (f64, Vec<f64>, f64) {
    let xn = y[n - 1];
    let r2: f64 = y[..n - 1].iter().map(|v| v * v).sum();
    let lead = m + 2.0 * d * d;
    let value = if xn > 0.0 { lead * xn * (xn / d).ln() } else { 0.0 } + xn * (r2 - d * d);
    if !derivs {
        return (value, Vec::new(), 0.0);
    }
    let mut g = vec![0.0; n];
    for i in 0..n - 1 {
        g[i] = 2.0 * xn * y[i];
    }
    g[n - 1] = lead * ((xn / d).ln() + 1.0) + r2 - d * d;
    let det = 2f64.powi(n as i32 - 1) * xn.powi(n as i32 - 2) * (lead - 2.0 * r2);
    (value, g, det)
}

impl Shape {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Shape::Polygon { .. } => "polygon",
            Shape::Box { .. } => "box",
            Shape::Ball { .. } => "ball",
            Shape::Bowl { .. } => "bowl",
        }
    }
}
