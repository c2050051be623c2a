//! Acceptance criteria, one line each. Exits nonzero when any criterion fails.

mod common;

use common::{
    aleksandrov_family, comparison_case_seeded, geo, lobachevsky_quad, sigma_t_quad, superadditivity_defect,
    witness_mass_quad,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpbound::analysis::{
    check_envelopes, fd_hessian, fd_hessian_det, fit_exponent, probe_samples, FnField, Model, ProbeSpec, SolutionField,
    TrianglePlacement,
};
use sharpbound::cli::{bundled_experiment, run_experiment};
use sharpbound::closed_forms::{
    bootstrap_sequence, lobachevsky, pn_total_mass, sample_points, surface_tension_t_closure, verify_family_inequality,
    ClosedFormFunction,
};
use sharpbound::geometry::ConvexDomain;
use sharpbound::linalg::sym_eigenvalues;
use sharpbound::sampling::halton;
use sharpbound::solver::{
    solve_dirichlet, solve_power_rhs, Backend, BoundaryData, DiscreteSolution, GasPoint, RhsSpec, SolverConfig,
};
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = (bool, String);

fn ac1() -> Outcome {
    let f = ClosedFormFunction::surface_tension_t();
    let field = FnField { domain: f.domain().clone(), f: |x: &[f64]| f.value(x) };
    let mut worst = 0.0f64;
    // The same points at half the step, to expose the O(h²) truncation term.
    let mut half = 0.0f64;
    let mut pts = 0;
    let mut i = 1;
    while pts < 100 {
        let p = halton(i, 2);
        i += 1;
        let x = [p[0], p[1]];
        if x[0] + x[1] >= 1.0 || f.dist(&x).unwrap() < 0.1 {
            continue;
        }
        worst = worst.max((fd_hessian_det(&field, &x, 1e-3).unwrap() - 1.0).abs());
        half = half.max((fd_hessian_det(&field, &x, 5e-4).unwrap() - 1.0).abs());
        pts += 1;
    }
    let mut edge = 0.0f64;
    for k in 0..=20 {
        let t = k as f64 / 20.0;
        for x in [[t, 0.0], [0.0, t], [t, 1.0 - t], [t, 1e-13], [1e-13, t]] {
            if x[0] + x[1] <= 1.0 {
                edge = edge.max(surface_tension_t_closure(x).unwrap().abs());
            }
        }
    }
    let center =
        (surface_tension_t_closure([1.0 / 3.0, 1.0 / 3.0]).unwrap() - sigma_t_quad(1.0 / 3.0, 1.0 / 3.0)).abs();
    (
        worst <= 1e-4 && edge <= 1e-8 && center <= 1e-8,
        format!("max |det − 1| {worst:.2e} on 100 points ({half:.2e} at h/2), boundary {edge:.1e}, center vs quadrature {center:.1e}"),
    )
}

fn ac2() -> Outcome {
    let pi_q = lobachevsky_quad(PI).abs();
    let half_q = lobachevsky_quad(PI / 2.0).abs();
    let exact = lobachevsky(PI).abs().max(lobachevsky(PI / 2.0).abs());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut sym = 0.0f64;
    for _ in 0..1000 {
        let t: f64 = rng.random_range(-10.0..10.0);
        sym = sym.max((lobachevsky(-t) + lobachevsky(t)).abs());
        sym = sym.max((lobachevsky(t + PI) - lobachevsky(t)).abs());
    }
    (
        pi_q <= 1e-10 && half_q <= 1e-10 && exact <= 1e-12 && sym <= 1e-10,
        format!("quadrature L(π) {pi_q:.1e}, L(π/2) {half_q:.1e}; odd/periodic max {sym:.1e}"),
    )
}

fn ac3() -> Outcome {
    let mut fams = Vec::new();
    for n in [2, 3] {
        for p in [0.5, 1.0, 2.0, 3.0] {
            fams.push(ClosedFormFunction::neg_power_super(n, p).unwrap());
        }
    }
    for n in [3, 4] {
        for g in [0.0, 0.5] {
            fams.push(ClosedFormFunction::pos_power_super(n, g, 1.0, None).unwrap());
            fams.push(ClosedFormFunction::holder_sub(ConvexDomain::unit_cube(n).unwrap(), None, g, 1.0).unwrap());
            fams.push(ClosedFormFunction::holder_sub(ConvexDomain::unit_cube(n).unwrap(), None, g, 10.0).unwrap());
        }
    }
    for n in [2, 3] {
        for m in [1.0, 10.0] {
            fams.push(ClosedFormFunction::log_lipschitz_sub(ConvexDomain::unit_cube(n).unwrap(), None, m).unwrap());
        }
    }
    for n in [2usize, 3, 4] {
        let lo = 2.0 / n as f64;
        for k in 0..9 {
            let alpha = lo + (1.0 - lo) * k as f64 / 8.0;
            fams.push(ClosedFormFunction::abreu_comparison(ConvexDomain::unit_cube(n).unwrap(), None, alpha).unwrap());
        }
    }
    let mut worst = f64::NEG_INFINITY;
    let mut failed = Vec::new();
    for f in &fams {
        let r = verify_family_inequality(f, 100_000).unwrap();
        worst = worst.max(r.max_violation);
        if !r.pass {
            failed.push(format!("{} n={}", r.family, r.dimension));
        }
    }
    (failed.is_empty(), format!("{} functions, max violation {worst:.2e}, failing {failed:?}", fams.len()))
}

/// Smallest FD-Hessian eigenvalue over sample points whose stencil fits.
fn min_fd_eigenvalue(f: &ClosedFormFunction) -> f64 {
    let n = f.dim();
    let field = FnField { domain: f.domain().clone(), f: |x: &[f64]| f.value(x) };
    let mut lo = f64::INFINITY;
    for x in sample_points(f.domain(), 10_000) {
        let d = f.dist(&x).unwrap();
        let h = (1e-4f64).min(d / (2.0 * n as f64));
        if h < 1e-7 {
            continue;
        }
        if let Ok(a) = fd_hessian(&field, &x, h) {
            let ev = sym_eigenvalues(&a, n);
            lo = lo.min(ev.iter().cloned().fold(f64::INFINITY, f64::min));
        }
    }
    lo
}

fn ac4() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [2usize, 3] {
        for p in [0.5, 1.0, 2.0] {
            let lo = min_fd_eigenvalue(&ClosedFormFunction::neg_power_super(n, p).unwrap());
            ok &= if p < 2.0 { lo < 0.0 } else { lo >= -1e-8 };
            parts.push(format!("n={n} p={p}: {lo:.2e}"));
        }
    }
    (ok, format!("min eigenvalue {}", parts.join(", ")))
}

fn disk_error(h: f64) -> (f64, usize) {
    let disk = ConvexDomain::ball(&[0.0, 0.0], 1.0).unwrap();
    let s = solve_dirichlet(&disk, &BoundaryData::Zero, &RhsSpec::Constant { m: 1.0 }, &geo(h)).unwrap();
    let e = (0..s.len())
        .map(|i| {
            let x = &s.nodes[i];
            (s.values[i] - 0.5 * (x[0] * x[0] + x[1] * x[1] - 1.0)).abs()
        })
        .fold(0.0, f64::max);
    (e, s.len())
}

fn ac5() -> Outcome {
    let (e1, _) = disk_error(1.0 / 28.0);
    let (e2, n2) = disk_error(1.0 / 56.0);
    let ratio = e2 / e1;
    (ratio <= 0.7 && e2 <= 5e-3, format!("errors {e1:.2e} -> {e2:.2e} (ratio {ratio:.3}) at {n2} nodes"))
}

fn ac6() -> Outcome {
    let tri = ConvexDomain::lozenge_triangle();
    let mut parts = Vec::new();
    let mut ok = true;
    for h in [1.0 / 32.0, 1.0 / 64.0] {
        let s = solve_dirichlet(&tri, &BoundaryData::Zero, &RhsSpec::Constant { m: 1.0 }, &geo(h)).unwrap();
        let e = (0..s.len())
            .map(|i| (s.values[i] - surface_tension_t_closure([s.nodes[i][0], s.nodes[i][1]]).unwrap()).abs())
            .fold(0.0, f64::max);
        ok &= e <= 10.0 * h;
        parts.push(format!("h=1/{}: {e:.2e} ({:.2}h)", (1.0 / h).round(), e / h));
    }
    (ok, format!("sup error {}", parts.join(", ")))
}

fn ac7() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = bundled_experiment("neg-q-2d").unwrap();
    cfg.outputs.dir = Some(tmp.path().to_path_buf());
    let out = run_experiment(&cfg, tmp.path()).unwrap();
    match &out.report.oracle {
        Some(o) => (out.report.pass, format!("β = {:.4} against [{:.4}, {:.4}]", o.measured, o.lower, o.upper)),
        None => (false, format!("no fit: {:?}", out.report.error)),
    }
}

fn power_fit(sol: &DiscreteSolution, facet: usize, levels: usize) -> f64 {
    let field = SolutionField::new(sol).unwrap();
    let probe = ProbeSpec { facet, levels, d0: None, anchor: None }.resolve(&field, Some(sol.h)).unwrap();
    fit_exponent(&probe_samples(&field, &probe, Model::PowerLaw).unwrap(), Model::PowerLaw).unwrap().rate()
}

fn ac8() -> Outcome {
    let cube = ConvexDomain::unit_cube(3).unwrap();
    let cfg = SolverConfig::with_backend(Backend::WideStencil, 1.0 / 64.0);
    let s = solve_dirichlet(&cube, &BoundaryData::Zero, &RhsSpec::Constant { m: 1.0 }, &cfg).unwrap();
    let beta = power_fit(&s, 0, 3);
    ((beta - 2.0 / 3.0).abs() <= 0.1, format!("β = {beta:.4} at h = 1/64, {} nodes", s.len()))
}

fn ac9() -> Outcome {
    let cube = ConvexDomain::unit_cube(4).unwrap();
    let h = 1.0 / 32.0;
    let cfg = SolverConfig::with_backend(Backend::WideStencil, h);
    let s = solve_power_rhs(&cube, 1.0, &cfg).unwrap();
    let beta = power_fit(&s, 0, 3);
    let lo = 2.0 / 3.0 - 0.05;
    (beta > lo && beta <= 1.0, format!("β = {beta:.4} against ({lo:.4}, 1] at h = 1/32"))
}

fn ac10() -> Outcome {
    let f = ClosedFormFunction::surface_tension_t();
    let spec = ProbeSpec { facet: 0, levels: 6, d0: Some(0.1), anchor: Some(vec![0.5, 0.0]) };
    let probe = spec.resolve(&f, None).unwrap();
    let values = probe_samples(&f, &probe, Model::PowerLaw).unwrap();
    let ll = fit_exponent(&values, Model::LogLipschitz).unwrap();
    let pl = fit_exponent(&values, Model::PowerLaw).unwrap();
    let grads = probe_samples(&f, &probe, Model::GradientLog).unwrap();
    let slope = fit_exponent(&grads, Model::GradientLog).unwrap().rate();
    let rel = (slope * PI - 1.0).abs();
    (
        ll.log_rms <= 0.8 * pl.log_rms && rel <= 0.1,
        format!(
            "log-rms {:.2e} vs power {:.2e} (ratio {:.3}); gradient slope {slope:.4} ({:.1}% off 1/π)",
            ll.log_rms,
            pl.log_rms,
            ll.log_rms / pl.log_rms,
            100.0 * rel
        ),
    )
}

fn ac11() -> Outcome {
    let sq = ConvexDomain::unit_square();
    let gas = vec![GasPoint { at: vec![0.5, 0.5], c: 0.5 }];
    let h = 1.0 / 64.0;
    let s = solve_dirichlet(&sq, &BoundaryData::Zero, &RhsSpec::Measure { gas: gas.clone() }, &geo(h)).unwrap();
    let env =
        check_envelopes(&s, &BoundaryData::Zero, &gas, TrianglePlacement { facet: 2, offset: 0.25, r: 0.5 }, None)
            .unwrap();
    let field = SolutionField::new(&s).unwrap();
    let probe = ProbeSpec { facet: 2, levels: 3, d0: None, anchor: None }.resolve(&field, Some(h)).unwrap();
    let fit = fit_exponent(&probe_samples(&field, &probe, Model::GradientLog).unwrap(), Model::GradientLog).unwrap();
    (
        env.pass && fit.r2 >= 0.99,
        format!(
            "envelope violations {:.1e}/{:.1e} (tol {:.1e}), gradient-log R² {:.4}",
            env.lower.max_violation, env.upper.max_violation, env.tolerance, fit.r2
        ),
    )
}

fn ac12() -> Outcome {
    let comparison = (0..100).filter(|&s| !comparison_case_seeded(s).pass).count();
    let defect = (0..200).map(superadditivity_defect).fold(f64::NEG_INFINITY, f64::max);
    let (c, lo, theory) = aleksandrov_family();
    let mut mass_err = 0.0f64;
    for (n, p) in [(2usize, 0.5), (2, 1.0), (2, 1.5), (3, 1.0), (3, 2.0)] {
        let m = pn_total_mass(n, p).unwrap();
        mass_err = mass_err.max((witness_mass_quad(n, p) - m).abs() / m);
    }
    let mut boot = 0.0f64;
    for (n, q) in [(3usize, 0.0), (3, 0.5), (4, 1.0), (5, 2.5)] {
        let lim = 2.0 / (n as f64 - q);
        for (k, a) in bootstrap_sequence(n, q, 40).unwrap().iter().enumerate() {
            let want = (q / n as f64).powi(k as i32) * (1.0 - lim);
            boot = boot.max(((a - lim).abs() - want).abs());
        }
    }
    (
        comparison == 0 && defect <= 1e-10 && c <= theory && lo >= 0.5 * c && mass_err <= 1e-3 && boot <= 4.0 * f64::EPSILON,
        format!(
            "comparison failures {comparison}/100, superadditivity defect {defect:.1e}, Aleksandrov C {c:.3} (≤ {theory:.3}), mass rel err {mass_err:.1e}, bootstrap {boot:.1e}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
        ("AC11", ac11),
        ("AC12", ac12),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| a.starts_with("AC")).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !only.is_empty() && !only.iter().any(|o| o == name) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = run();
        println!("{name:<5} {} {detail} [{:.1}s]", if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        failed += usize::from(!ok);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
