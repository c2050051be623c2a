use super::boundary::BoundaryData;
use super::config::{Backend, SolverConfig};
use super::geometric::{initial_guess, newton};
use super::mesh::{planar_nodes, PlanarNodes};
use super::rhs::RhsSpec;
use super::solution::{Diagnostics, DiscreteSolution, Layout};
use super::stencil::GridProblem;
use crate::error::{param, Error, Result};
use crate::geometry::ConvexDomain;

/// Planar node set with boundary data and distances, shared by Dirichlet and Picard solves.
pub(crate) struct PlanarProblem {
    pub domain: ConvexDomain,
    pub nodes: PlanarNodes,
    pub data: Vec<f64>,
    pub dist: Vec<f64>,
    pub h: f64,
}

impl PlanarProblem {
    pub fn new(domain: &ConvexDomain, bd: &BoundaryData, h: f64) -> Result<Self> {
        let nodes = planar_nodes(domain, h)?;
        let mut data = vec![0.0; nodes.points.len()];
        let mut dist = vec![0.0; nodes.points.len()];
        for (i, p) in nodes.points.iter().enumerate() {
            if nodes.boundary[i] {
                data[i] = bd.value(domain, p);
            } else {
                dist[i] = domain.dist_to_boundary(p)?;
            }
        }
        Ok(PlanarProblem { domain: domain.clone(), nodes, data, dist, h })
    }

    pub fn interior(&self) -> Vec<usize> {
        self.nodes.interior().collect()
    }

    /// Lattice masses `f(x_i) h²` plus snapped atoms; returns the snap distances.
    pub fn targets(&self, rhs: &RhsSpec) -> Result<(Vec<f64>, Vec<f64>)> {
        let h2 = self.h * self.h;
        let mut t: Vec<f64> = (0..self.nodes.points.len())
            .map(|i| if self.nodes.boundary[i] { 0.0 } else { rhs.density(self.dist[i]) * h2 })
            .collect();
        let mut snaps = Vec::new();
        if let RhsSpec::Measure { gas } = rhs {
            let int = self.interior();
            for g in gas {
                if !self.domain.contains(&g.at) {
                    return Err(Error::OutsideDomain { point: g.at.clone() });
                }
                let d2 = |i: usize| {
                    let p = self.nodes.points[i];
                    (p[0] - g.at[0]).powi(2) + (p[1] - g.at[1]).powi(2)
                };
                let best = int
                    .iter()
                    .copied()
                    .min_by(|&a, &b| d2(a).total_cmp(&d2(b)))
                    .ok_or_else(|| Error::Geometry("mesh has no interior nodes".into()))?;
                t[best] += g.c;
                snaps.push(d2(best).sqrt());
            }
        }
        Ok((t, snaps))
    }

    pub fn start(&self, target: &[f64]) -> Result<Vec<f64>> {
        initial_guess(&self.nodes, &self.data, target, self.h)
    }

    pub fn solve(&self, target: &[f64], u: &mut [f64], cfg: &SolverConfig) -> Result<(Vec<f64>, usize, f64)> {
        let out = newton(&self.nodes.points, &self.nodes.boundary, u, target, cfg)?;
        Ok((out.areas, out.iterations, out.residual))
    }

    pub fn solution(&self, values: Vec<f64>, mut masses: Vec<f64>, diagnostics: Diagnostics) -> DiscreteSolution {
        for (i, b) in self.nodes.boundary.iter().enumerate() {
            if *b {
                masses[i] = 0.0;
            }
        }
        DiscreteSolution {
            domain: self.domain.clone(),
            h: self.h,
            layout: Layout::Scattered,
            nodes: self.nodes.points.iter().map(|p| p.to_vec()).collect(),
            boundary: self.nodes.boundary.clone(),
            values,
            masses,
            diagnostics,
        }
    }
}

/// Discrete Aleksandrov solution of `det D²u = μ`, `u = data` on the boundary.
pub fn solve_dirichlet(
    domain: &ConvexDomain,
    data: &BoundaryData,
    rhs: &RhsSpec,
    cfg: &SolverConfig,
) -> Result<DiscreteSolution> {
    cfg.validate()?;
    rhs.validate(domain.dim())?;
    data.check(domain)?;
    if matches!(rhs, RhsSpec::SolutionPower { .. }) {
        return param("solution-dependent right-hand sides go through solve_power_rhs");
    }
    match cfg.backend {
        Backend::Geometric => {
            let p = PlanarProblem::new(domain, data, cfg.h)?;
            let (target, snaps) = p.targets(rhs)?;
            let mut u = p.start(&target)?;
            let (areas, iterations, residual) = p.solve(&target, &mut u, cfg)?;
            let diagnostics = Diagnostics {
                backend: cfg.backend.to_string(),
                iterations,
                residual,
                picard_history: vec![],
                snap_distances: snaps,
                target_mass: target.iter().sum(),
            };
            Ok(p.solution(u, areas, diagnostics))
        }
        Backend::WideStencil => {
            if !data.is_zero() {
                return Err(Error::Unsupported("the wide-stencil backend takes zero boundary data".into()));
            }
            if let RhsSpec::Measure { gas } = rhs {
                if !gas.is_empty() {
                    return Err(Error::Unsupported("atoms need the geometric backend".into()));
                }
            }
            let g = GridProblem::new(domain, cfg, rhs.is_box_symmetric())?;
            let f: Vec<f64> = g.dist().iter().map(|&d| rhs.density(d)).collect();
            let mut u = g.start(&f);
            let (iterations, residual) = g.solve(&f, &mut u, cfg)?;
            let diagnostics = Diagnostics {
                backend: cfg.backend.to_string(),
                iterations,
                residual,
                picard_history: vec![],
                snap_distances: vec![],
                target_mass: 0.0,
            };
            Ok(g.solution(&u, &f, diagnostics))
        }
    }
}
