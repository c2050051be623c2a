//! Damped Newton on the map from nodal values to subgradient-cell areas of the convex
//! envelope, in the plane.

use super::config::SolverConfig;
use super::mesh::PlanarNodes;
use super::triangulation::{RegularTriangulation, TriMesh};
use crate::error::{Error, Result};
use crate::linalg::Triplets;

pub(crate) struct CellState {
    pub areas: Vec<f64>,
    mesh: TriMesh,
    grads: Vec<[f64; 2]>,
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Cell areas at the interior nodes; `Ok(None)` when an interior node is off the hull.
pub(crate) fn cell_state(pts: &[[f64; 2]], boundary: &[bool], u: &[f64]) -> Result<Option<CellState>> {
    let tri = RegularTriangulation::new(pts, u);
    // Boundary nodes can drop off the hull by rounding along straight edges; data feasibility
    // is checked once, with a tolerance, in `initial_guess`.
    if (0..pts.len()).any(|i| !boundary[i] && tri.is_hidden(i)) {
        return Ok(None);
    }
    let mesh = tri.mesh();
    let grads = mesh.gradients(pts, u);
    let mut areas = vec![0.0; pts.len()];
    for (t, vs) in mesh.verts.iter().enumerate() {
        for k in 0..3 {
            let v = vs[k];
            if boundary[v] {
                continue;
            }
            // The next triangle counter-clockwise around v is across the edge opposite v[k+1].
            let Some(next) = mesh.nbs[t][(k + 1) % 3] else {
                return Err(Error::Geometry(format!("interior node {v} lies on the hull of the nodes")));
            };
            areas[v] += 0.5 * cross(grads[t], grads[next]);
        }
    }
    Ok(Some(CellState { areas, mesh, grads }))
}

impl CellState {
    /// `−∂(area)/∂u` restricted to the unknowns; symmetric and diagonally dominant.
    fn stiffness(&self, pts: &[[f64; 2]], index: &[usize], m: usize) -> Triplets {
        let mut l = Triplets::with_capacity(m, 7 * m);
        for (t, vs) in self.mesh.verts.iter().enumerate() {
            for k in 0..3 {
                let Some(s) = self.mesh.nbs[t][k] else { continue };
                if s < t {
                    continue;
                }
                let (a, b) = (vs[(k + 1) % 3], vs[(k + 2) % 3]);
                let (ga, gb) = (self.grads[t], self.grads[s]);
                let dual = (ga[0] - gb[0]).hypot(ga[1] - gb[1]);
                let w = dual / (pts[a][0] - pts[b][0]).hypot(pts[a][1] - pts[b][1]);
                let (ia, ib) = (index[a], index[b]);
                if ia != usize::MAX {
                    l.push(ia, ia, w);
                }
                if ib != usize::MAX {
                    l.push(ib, ib, w);
                }
                if ia != usize::MAX && ib != usize::MAX {
                    l.push(ia, ib, -w);
                    l.push(ib, ia, -w);
                }
            }
        }
        // Keeps the factorization alive when a cell has a zero-length dual edge.
        for i in 0..m {
            l.push(i, i, 1e-14);
        }
        l
    }
}

pub(crate) struct NewtonOutcome {
    pub areas: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn residuals(areas: &[f64], target: &[f64], interior: &[usize]) -> Vec<f64> {
    interior.iter().map(|&v| areas[v] - target[v]).collect()
}

fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_inf(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Adjust interior values of `u` until every interior cell has its target area.
pub(crate) fn newton(
    pts: &[[f64; 2]],
    boundary: &[bool],
    u: &mut [f64],
    target: &[f64],
    cfg: &SolverConfig,
) -> Result<NewtonOutcome> {
    let interior: Vec<usize> = (0..pts.len()).filter(|&i| !boundary[i]).collect();
    let m = interior.len();
    let mut index = vec![usize::MAX; pts.len()];
    for (k, &v) in interior.iter().enumerate() {
        index[v] = k;
    }
    let scale = interior.iter().fold(0.0f64, |a, &v| a.max(target[v]));
    if interior.iter().any(|&v| !(target[v] > 0.0)) {
        return Err(Error::Parameter("node masses must be positive".into()));
    }
    let tol = cfg.mass_tol * scale;
    let mut state = cell_state(pts, boundary, u)?
        .ok_or_else(|| Error::Convexity("initial guess is not convex at every node".into()))?;
    let min_target = interior.iter().fold(f64::INFINITY, |a, &v| a.min(target[v]));
    let min_area = interior.iter().fold(f64::INFINITY, |a, &v| a.min(state.areas[v]));
    let floor = 0.5 * min_target.min(min_area);
    if !(floor > 0.0) {
        return Err(Error::Convexity("initial guess has a degenerate cell".into()));
    }
    let mut r = residuals(&state.areas, target, &interior);
    let mut history = vec![norm_inf(&r)];
    for it in 0..cfg.max_iterations {
        if norm_inf(&r) <= tol {
            return Ok(NewtonOutcome { areas: state.areas, iterations: it, residual: norm_inf(&r) });
        }
        let l = state.stiffness(pts, &index, m);
        let delta = l.solve_spd(&r).or_else(|_| l.solve_lu(&r))?;
        let base: Vec<f64> = interior.iter().map(|&v| u[v]).collect();
        let r0 = norm2(&r);
        let mut tau = 1.0;
        let mut accepted = false;
        for _ in 0..50 {
            for (k, &v) in interior.iter().enumerate() {
                u[v] = base[k] + tau * delta[k];
            }
            if let Some(s) = cell_state(pts, boundary, u)? {
                let ok_area = interior.iter().all(|&v| s.areas[v] >= floor);
                let rn = residuals(&s.areas, target, &interior);
                if ok_area && norm2(&rn) <= (1.0 - 0.5 * tau) * r0 {
                    state = s;
                    r = rn;
                    accepted = true;
                    break;
                }
            }
            tau *= 0.5;
        }
        history.push(norm_inf(&r));
        if !accepted {
            for (k, &v) in interior.iter().enumerate() {
                u[v] = base[k];
            }
            return Err(Error::Convergence { iterations: it + 1, residual: norm_inf(&r), history });
        }
    }
    if norm_inf(&r) <= tol {
        return Ok(NewtonOutcome { areas: state.areas, iterations: cfg.max_iterations, residual: norm_inf(&r) });
    }
    Err(Error::Convergence { iterations: cfg.max_iterations, residual: norm_inf(&r), history })
}

/// Strictly convex start: the envelope of the boundary data plus a paraboloid that vanishes
/// outside the nodes, scaled to the mean target density.
pub(crate) fn initial_guess(nodes: &PlanarNodes, data: &[f64], target: &[f64], h: f64) -> Result<Vec<f64>> {
    let pts = &nodes.points;
    let bidx: Vec<usize> = (0..pts.len()).filter(|&i| nodes.boundary[i]).collect();
    let bpts: Vec<[f64; 2]> = bidx.iter().map(|&i| pts[i]).collect();
    let bval: Vec<f64> = bidx.iter().map(|&i| data[i]).collect();
    let flat = bval.iter().all(|v| *v == 0.0);
    let env = if flat {
        None
    } else {
        let tri = RegularTriangulation::new(&bpts, &bval);
        let mesh = tri.mesh();
        let scale = bval.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in (0..bpts.len()).filter(|&i| tri.is_hidden(i)) {
            let below = match mesh.locate(&bpts, bpts[i]) {
                Some((t, w)) => {
                    let vs = mesh.verts[t];
                    w[0] * bval[vs[0]] + w[1] * bval[vs[1]] + w[2] * bval[vs[2]]
                }
                None => f64::NEG_INFINITY,
            };
            if bval[i] - below > 1e-9 * scale {
                return Err(Error::Convexity(format!(
                    "boundary data at {:?} is not the trace of a convex function",
                    bpts[i]
                )));
            }
        }
        Some(mesh)
    };
    let mut c = [0.0; 2];
    for p in &bpts {
        c[0] += p[0] / bpts.len() as f64;
        c[1] += p[1] / bpts.len() as f64;
    }
    let r2 = bpts.iter().fold(0.0f64, |a, p| a.max((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)));
    let int: Vec<usize> = nodes.interior().collect();
    let mean = int.iter().map(|&v| target[v]).sum::<f64>() / int.len().max(1) as f64;
    let t = (mean / (h * h)).sqrt();
    let mut u = data.to_vec();
    for &v in &int {
        let p = pts[v];
        let base = match &env {
            None => 0.0,
            Some(mesh) => {
                let (tr, w) =
                    mesh.locate(&bpts, p).ok_or_else(|| Error::Geometry("node outside the boundary hull".into()))?;
                let vs = mesh.verts[tr];
                w[0] * bval[vs[0]] + w[1] * bval[vs[1]] + w[2] * bval[vs[2]]
            }
        };
        u[v] = base + 0.5 * t * ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) - r2);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexDomain;
    use crate::solver::mesh::planar_nodes;

    #[test]
    fn lattice_quadratic_cells_are_squares() {
        let nodes = planar_nodes(&ConvexDomain::unit_square(), 0.125).unwrap();
        let u: Vec<f64> = nodes.points.iter().map(|p| 0.5 * (p[0] * p[0] + p[1] * p[1])).collect();
        let s = cell_state(&nodes.points, &nodes.boundary, &u).unwrap().unwrap();
        for i in nodes.interior() {
            assert!((s.areas[i] - 0.125f64.powi(2)).abs() < 1e-14, "{}", s.areas[i]);
        }
    }

    #[test]
    fn newton_recovers_quadratic() {
        let h = 0.1;
        let nodes = planar_nodes(&ConvexDomain::unit_square(), h).unwrap();
        let exact: Vec<f64> = nodes.points.iter().map(|p| (p[0] - 0.3).powi(2) + 0.5 * (p[1] - 0.6).powi(2)).collect();
        let target: Vec<f64> = nodes.boundary.iter().map(|b| if *b { 0.0 } else { 2.0 * h * h }).collect();
        let data: Vec<f64> = exact.iter().zip(&nodes.boundary).map(|(e, b)| if *b { *e } else { 0.0 }).collect();
        let mut u = initial_guess(&nodes, &data, &target, h).unwrap();
        let out = newton(&nodes.points, &nodes.boundary, &mut u, &target, &SolverConfig::default()).unwrap();
        let err = u.iter().zip(&exact).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-8, "{err} after {} iterations", out.iterations);
    }
}
