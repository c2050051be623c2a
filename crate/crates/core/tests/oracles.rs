mod common;

use common::{cell_area_by_clipping, lobachevsky_quad, sigma_t_quad, witness_mass_quad, Lcg};
use sharpbound::analysis::{fd_hessian_det, FnField};
use sharpbound::closed_forms::{
    bootstrap_sequence, lobachevsky, pn_total_mass, surface_tension_t_closure, ClosedFormFunction,
};
use sharpbound::geometry::{subgradient_cell, Cell, ConvexDomain, PlFunction};
use std::f64::consts::PI;

#[test]
fn lobachevsky_matches_quadrature() {
    for theta in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, PI, 0.1, 1.0, 2.5, -0.7, 4.0] {
        let q = lobachevsky_quad(theta);
        assert!((lobachevsky(theta) - q).abs() < 1e-10, "θ = {theta}: {} vs {q}", lobachevsky(theta));
    }
    assert!((lobachevsky(PI / 3.0) - 0.3383138688032179).abs() < 1e-13);
}

#[test]
fn surface_tension_center_matches_quadrature() {
    let v = surface_tension_t_closure([1.0 / 3.0, 1.0 / 3.0]).unwrap();
    assert!((v - sigma_t_quad(1.0 / 3.0, 1.0 / 3.0)).abs() < 1e-8);
    let mut g = Lcg(5);
    for _ in 0..20 {
        let (x, y) = (g.next() * 0.9 + 0.05, g.next() * 0.9 + 0.05);
        if x + y >= 0.95 {
            continue;
        }
        let v = surface_tension_t_closure([x, y]).unwrap();
        assert!((v - sigma_t_quad(x, y)).abs() < 1e-9, "({x}, {y})");
    }
}

#[test]
fn closed_form_determinants_match_finite_differences() {
    let fams = vec![
        ClosedFormFunction::neg_power_super(2, 2.0).unwrap(),
        ClosedFormFunction::neg_power_super(3, 1.0).unwrap(),
        ClosedFormFunction::pos_power_super(3, 0.0, 16.0, None).unwrap(),
        ClosedFormFunction::pn_witness(2, 1.0).unwrap(),
        ClosedFormFunction::log_lipschitz_sub(ConvexDomain::unit_square(), None, 1.0).unwrap(),
        ClosedFormFunction::surface_tension_t(),
    ];
    for f in &fams {
        let n = f.dim();
        let field = FnField { domain: f.domain().clone(), f: |x: &[f64]| f.value(x) };
        let mut g = Lcg(11);
        let (lo, hi) = f.domain().bounding_box();
        let mut checked = 0;
        while checked < 20 {
            let x: Vec<f64> = (0..n).map(|k| lo[k] + g.next() * (hi[k] - lo[k])).collect();
            if !f.domain().contains(&x) || f.dist(&x).unwrap() < 0.1 {
                continue;
            }
            let exact = f.eval(&x).unwrap().hessian_det;
            let fd = fd_hessian_det(&field, &x, 1e-3).unwrap();
            assert!((fd - exact).abs() <= 1e-3 * (1.0 + exact.abs()), "{}: at {x:?} fd {fd} vs {exact}", f.family());
            checked += 1;
        }
    }
}

#[test]
fn subgradient_cells_match_half_plane_clipping() {
    for seed in 0..50u64 {
        let mut g = Lcg(seed + 1);
        let m = 5 + (seed as usize % 6);
        let nodes: Vec<[f64; 2]> = (0..m).map(|_| [g.next(), g.next()]).collect();
        let (a, b, c) = (0.2 + g.next(), g.next() - 0.5, g.next() - 0.5);
        // Convex data, so every node lies on the lower hull.
        let values: Vec<f64> = nodes
            .iter()
            .map(|p| p[0] * p[0] + 2.0 * p[1] * p[1] + (a * p[0] + b * p[1] + c).max(b * p[0] - a * p[1]))
            .collect();
        let f = PlFunction { nodes: nodes.clone(), values: values.clone() };
        for i in 0..m {
            let oracle = cell_area_by_clipping(&nodes, &values, i, 1e6);
            match (subgradient_cell(&f, i).unwrap(), oracle) {
                (Cell::Unbounded, None) => {}
                (Cell::Bounded(p), Some(a)) => {
                    let area = Cell::Bounded(p).area();
                    assert!((area - a).abs() <= 1e-9 * (1.0 + a), "seed {seed} node {i}: {area} vs {a}");
                }
                (c, o) => panic!("seed {seed} node {i}: {c:?} vs {o:?}"),
            }
        }
    }
}

#[test]
fn witness_mass_matches_quadrature() {
    for (n, p) in [(2usize, 0.5), (2, 1.0), (2, 1.5), (3, 1.0), (3, 2.0)] {
        let total = witness_mass_quad(n, p);
        let m = pn_total_mass(n, p).unwrap();
        assert!((total - m).abs() <= 1e-3 * m, "n = {n}, p = {p}: quadrature {total} vs {m}");
    }
}

#[test]
fn bootstrap_contraction_identity() {
    for (n, q) in [(3usize, 0.0), (3, 0.5), (4, 1.0), (5, 2.5), (6, 0.3)] {
        let nf = n as f64;
        let lim = 2.0 / (nf - q);
        let seq = bootstrap_sequence(n, q, 30).unwrap();
        for (k, a) in seq.iter().enumerate() {
            let want = (q / nf).powi(k as i32) * (1.0 - lim);
            assert!(((a - lim).abs() - want).abs() <= 4.0 * f64::EPSILON, "n {n} q {q} k {k}");
        }
    }
}
