//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use quadrature::double_exponential::integrate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpbound::geometry::{subgradient_measure, unit_ball_volume, ConvexDomain, PlFunction};
use sharpbound::solver::{
    discrete_comparison_check, solve_dirichlet, Backend, BoundaryData, ComparisonReport, DiscreteSolution, RhsSpec,
    SolverConfig,
};
use std::f64::consts::PI;

/// `−∫₀^θ log|2 sin u| du` by tanh-sinh quadrature, split at multiples of π.
pub fn lobachevsky_quad(theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let sign = theta.signum();
    let t = theta.abs();
    let f = |u: f64| -(2.0 * u.sin()).abs().ln();
    let mut total = 0.0;
    let mut a = 0.0;
    while a < t {
        let b = (a + PI).min(t);
        total += integrate(f, a, b, 1e-14).integral;
        a = b;
    }
    sign * total
}

/// Lozenge surface tension from the quadrature Lobachevsky function.
pub fn sigma_t_quad(x: f64, y: f64) -> f64 {
    -(lobachevsky_quad(PI * x) + lobachevsky_quad(PI * y) + lobachevsky_quad(PI * (1.0 - x - y))) / (PI * PI)
}

/// Area of `{p : f_j − f_i ≥ p·(x_j − x_i) for all j}` by clipping a large square with each
/// half-plane. `None` if the cell reaches the clipping box.
pub fn cell_area_by_clipping(nodes: &[[f64; 2]], values: &[f64], i: usize, big: f64) -> Option<f64> {
    let mut poly = vec![[-big, -big], [big, -big], [big, big], [-big, big]];
    for j in 0..nodes.len() {
        if j == i {
            continue;
        }
        let a = [nodes[j][0] - nodes[i][0], nodes[j][1] - nodes[i][1]];
        let c = values[j] - values[i];
        let inside = |p: [f64; 2]| a[0] * p[0] + a[1] * p[1] - c;
        let mut out = Vec::new();
        for k in 0..poly.len() {
            let p = poly[k];
            let q = poly[(k + 1) % poly.len()];
            let (sp, sq) = (inside(p), inside(q));
            if sp <= 0.0 {
                out.push(p);
            }
            if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        poly = out;
        if poly.is_empty() {
            return Some(0.0);
        }
    }
    if poly.iter().any(|p| p[0].abs() >= big * (1.0 - 1e-9) || p[1].abs() >= big * (1.0 - 1e-9)) {
        return None;
    }
    let m = poly.len();
    let s: f64 = (0..m).map(|k| poly[k][0] * poly[(k + 1) % m][1] - poly[(k + 1) % m][0] * poly[k][1]).sum();
    Some(0.5 * s.abs())
}

/// Tiny deterministic generator for test inputs.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// `det D²(x_n^a (1−r²)^b)` for the radial profile, by hand.
fn witness_det(n: usize, a: f64, b: f64, r: f64, z: f64) -> f64 {
    let s = 1.0 - r * r;
    let v = z.powf(a) * s.powf(b);
    let vzz = a * (a - 1.0) * v / (z * z);
    // d/dr of s^b is −2 r b s^{b−1}.
    let vr_over_r = -2.0 * b * v / s;
    let vrr = vr_over_r + 4.0 * r * r * b * (b - 1.0) * v / (s * s);
    let vrz = -2.0 * r * b * a * v / (s * z);
    let block = vrr * vzz - vrz * vrz;
    // −D²v has determinant (−1)^n det D²v; the tangential directions contribute v_r/r each.
    let det = block * vr_over_r.powi(n as i32 - 2);
    if n % 2 == 0 {
        det
    } else {
        -det
    }
}

/// Total mass of the bowl witness by nested tanh-sinh quadrature of its Hessian determinant.
pub fn witness_mass_quad(n: usize, p: f64) -> f64 {
    let a = 2.0 / (n as f64 + p);
    let b = 1.0 - a;
    // z = top · t^k tames the z^{na−2} singularity.
    let k = (1.0 / (n as f64 * a - 1.0)).ceil();
    let inner = |r: f64| {
        let top = 1.0 - r * r;
        let g = |t: f64| witness_det(n, a, b, r, top * t.powf(k)) * top * k * t.powf(k - 1.0);
        integrate(g, 0.0, 1.0, 1e-12).integral
    };
    match n {
        2 => 2.0 * integrate(inner, 0.0, 1.0, 1e-10).integral,
        3 => integrate(|r| 2.0 * PI * r * inner(r), 0.0, 1.0, 1e-10).integral,
        _ => panic!("radial quadrature covers n = 2, 3"),
    }
}

pub fn geo(h: f64) -> SolverConfig {
    SolverConfig::with_backend(Backend::Geometric, h)
}

/// Solve an ordered pair on the unit square at `h = 1/8` and compare.
pub fn comparison_case(m1: f64, extra: f64, g1: f64, dg: f64, base: &[f64], lift: &[f64]) -> ComparisonReport {
    // Pointwise smaller density (dist ≤ 1/2 on the square) and larger boundary data.
    let dom = ConvexDomain::unit_square();
    let r1 = RhsSpec::DistPower { m: m1, gamma: g1 + dg };
    let r2 = RhsSpec::DistPower { m: m1 + extra, gamma: g1 };
    let d1 = BoundaryData::VertexAffine { values: base.iter().zip(lift).map(|(b, l)| b + l).collect() };
    let d2 = BoundaryData::VertexAffine { values: base.to_vec() };
    let u1 = solve_dirichlet(&dom, &d1, &r1, &geo(0.125)).unwrap();
    let u2 = solve_dirichlet(&dom, &d2, &r2, &geo(0.125)).unwrap();
    discrete_comparison_check(&u1, &u2).unwrap()
}

/// `comparison_case` with parameters drawn from `seed`.
pub fn comparison_case_seeded(seed: u64) -> ComparisonReport {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut u = |lo: f64, hi: f64| lo + (hi - lo) * r.random::<f64>();
    let (m1, extra, g1, dg) = (u(0.2, 2.0), u(0.0, 2.0), u(0.0, 1.5), u(0.0, 1.0));
    let base: Vec<f64> = (0..4).map(|_| u(-0.5, 0.5)).collect();
    let lift: Vec<f64> = (0..4).map(|_| u(0.0, 0.5)).collect();
    comparison_case(m1, extra, g1, dg, &base, &lift)
}

/// Nodes in the unit square with the corners included.
fn random_nodes(rng: &mut TestRng, m: usize) -> Vec<[f64; 2]> {
    let mut nodes = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    while nodes.len() < m {
        nodes.push([0.05 + 0.9 * rng.random_unit(), 0.05 + 0.9 * rng.random_unit()]);
    }
    nodes
}

pub struct TestRng(ChaCha8Rng);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn random_unit(&mut self) -> f64 {
        self.0.random()
    }
}

/// Samples of a random convex function: a quadratic plus a maximum of affine pieces.
fn random_convex(rng: &mut TestRng, nodes: &[[f64; 2]]) -> Vec<f64> {
    let a = 0.2 + rng.random_unit();
    let c = 0.2 + rng.random_unit();
    let b = (rng.random_unit() - 0.5) * (a * c).sqrt();
    let planes: Vec<[f64; 3]> = (0..3)
        .map(|_| [rng.random_unit() * 2.0 - 1.0, rng.random_unit() * 2.0 - 1.0, rng.random_unit() - 0.5])
        .collect();
    nodes
        .iter()
        .map(|p| {
            let q = a * p[0] * p[0] + 2.0 * b * p[0] * p[1] + c * p[1] * p[1];
            q + planes.iter().map(|l| l[0] * p[0] + l[1] * p[1] + l[2]).fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// Largest `measure(f) + measure(g) − measure(f + g)` over interior nodes, relative.
pub fn superadditivity_defect(seed: u64) -> f64 {
    let mut rng = TestRng::new(seed);
    let m = 6 + (seed as usize % 7);
    let nodes = random_nodes(&mut rng, m);
    let fv = random_convex(&mut rng, &nodes);
    let gv = random_convex(&mut rng, &nodes);
    let sum: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| a + b).collect();
    let f = PlFunction { nodes: nodes.clone(), values: fv };
    let g = PlFunction { nodes: nodes.clone(), values: gv };
    let s = PlFunction { nodes, values: sum };
    // The corners carry unbounded cells; check the interior nodes.
    (4..m)
        .map(|i| {
            let mf = subgradient_measure(&f, &[i]).unwrap();
            let mg = subgradient_measure(&g, &[i]).unwrap();
            let ms = subgradient_measure(&s, &[i]).unwrap();
            (mf + mg - ms) / (1.0 + ms)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest `|u| / (dist · mass)^{1/n}` over interior nodes.
fn aleksandrov_ratio(sol: &DiscreteSolution) -> f64 {
    let n = sol.dim() as f64;
    let mass = sol.total_mass();
    (0..sol.len())
        .filter(|&i| !sol.boundary[i])
        .map(|i| sol.values[i].abs() / (sol.dist(i) * mass).powf(1.0 / n))
        .fold(0.0, f64::max)
}

/// Fitted Aleksandrov constant over zero-data solutions on the unit square: `(max, min, cone bound)`.
pub fn aleksandrov_family() -> (f64, f64, f64) {
    let dom = ConvexDomain::unit_square();
    let mut ratios = Vec::new();
    for h in [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] {
        for rhs in
            [RhsSpec::Constant { m: 0.5 }, RhsSpec::Constant { m: 4.0 }, RhsSpec::DistPower { m: 1.0, gamma: 1.0 }]
        {
            let sol = solve_dirichlet(&dom, &BoundaryData::Zero, &rhs, &geo(h)).unwrap();
            ratios.push(aleksandrov_ratio(&sol));
        }
    }
    let c = ratios.iter().cloned().fold(0.0, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    // The cone argument gives |u|^n ≤ n diam^{n−1} dist mass / ω_{n−1}.
    let n = 2.0;
    let theory = (n * dom.diam().powf(n - 1.0) / unit_ball_volume(1)).powf(1.0 / n);
    (c, lo, theory)
}
