use super::boundary::BoundaryData;
use super::config::{Backend, SolverConfig};
use super::dirichlet::PlanarProblem;
use super::rhs::RhsSpec;
use super::solution::{Diagnostics, DiscreteSolution};
use super::stencil::GridProblem;
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Shared fixed-point loop: `solve(f)` returns the exact discrete solution for density `f`.
fn picard<S>(q: f64, floor: f64, cfg: &SolverConfig, u0: Vec<f64>, mut solve: S) -> Result<(Vec<f64>, usize, Vec<f64>)>
where
    S: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let s0 = sup(&u0);
    let mut u = u0;
    let mut history = Vec::new();
    for it in 0..cfg.max_picard {
        let f: Vec<f64> = u.iter().map(|x| x.abs().max(floor).powf(q)).collect();
        let v = solve(&f)?;
        let blended: Vec<f64> = v.iter().zip(&u).map(|(a, b)| cfg.damping * a + (1.0 - cfg.damping) * b).collect();
        let s = sup(&blended);
        if !(s > 1e-10 * s0) {
            return Err(Error::Degenerate(format!("iterates collapsed to zero after {} Picard steps", it + 1)));
        }
        let change = blended.iter().zip(&u).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / s;
        history.push(change);
        u = blended;
        if change < cfg.picard_tol {
            return Ok((v, it + 1, history));
        }
    }
    Err(Error::Convergence {
        iterations: cfg.max_picard,
        residual: history.last().copied().unwrap_or(f64::NAN),
        history,
    })
}

/// Nontrivial solution of `det D²u = |u|^q`, `u = 0` on the boundary, by damped Picard
/// iteration started from the `det D²u = 1` solution. `|u|` is floored at the configured `ε`.
pub fn solve_power_rhs(domain: &ConvexDomain, q: f64, cfg: &SolverConfig) -> Result<DiscreteSolution> {
    cfg.validate()?;
    let n = domain.dim();
    RhsSpec::SolutionPower { q, floor: None }.validate(n)?;
    let floor = cfg.floor(n, q);
    let one = RhsSpec::Constant { m: 1.0 };
    match cfg.backend {
        Backend::Geometric => {
            let p = PlanarProblem::new(domain, &BoundaryData::Zero, cfg.h)?;
            let (target, _) = p.targets(&one)?;
            let mut u = p.start(&target)?;
            let (mut areas, mut iters, mut resid) = p.solve(&target, &mut u, cfg)?;
            let mut last_target = target;
            let mut history = Vec::new();
            if q != 0.0 {
                let h2 = cfg.h * cfg.h;
                let boundary = p.nodes.boundary.clone();
                let mut warm = u.clone();
                let mut solve = |f: &[f64]| -> Result<Vec<f64>> {
                    let t: Vec<f64> = f.iter().zip(&boundary).map(|(x, b)| if *b { 0.0 } else { x * h2 }).collect();
                    let (a, it, r) = p.solve(&t, &mut warm, cfg)?;
                    areas = a;
                    iters += it;
                    resid = r;
                    last_target = t;
                    Ok(warm.clone())
                };
                let (v, _, hist) = picard(q, floor, cfg, u, &mut solve)?;
                u = v;
                history = hist;
            }
            let diagnostics = Diagnostics {
                backend: cfg.backend.to_string(),
                iterations: iters,
                residual: resid,
                picard_history: history,
                snap_distances: vec![],
                target_mass: last_target.iter().sum(),
            };
            Ok(p.solution(u, areas, diagnostics))
        }
        Backend::WideStencil => {
            let g = GridProblem::new(domain, cfg, true)?;
            let ones = vec![1.0; g.len()];
            let mut u = g.start(&ones);
            let (mut iters, mut resid) = g.solve(&ones, &mut u, cfg)?;
            let mut last_f = ones;
            let mut history = Vec::new();
            if q != 0.0 {
                let mut warm = u.clone();
                let mut solve = |f: &[f64]| -> Result<Vec<f64>> {
                    let (it, r) = g.solve(f, &mut warm, cfg)?;
                    iters += it;
                    resid = r;
                    last_f = f.to_vec();
                    Ok(warm.clone())
                };
                let (v, _, hist) = picard(q, floor, cfg, u, &mut solve)?;
                u = v;
                history = hist;
            }
            let diagnostics = Diagnostics {
                backend: cfg.backend.to_string(),
                iterations: iters,
                residual: resid,
                picard_history: history,
                snap_distances: vec![],
                target_mass: 0.0,
            };
            Ok(g.solution(&u, &last_f, diagnostics))
        }
    }
}
