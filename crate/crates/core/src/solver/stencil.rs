//! Monotone wide-stencil scheme on box grids: `det D²u` as the minimum over orthogonal lattice
//! frames of the product of directional second differences, arms cut at the boundary.

use super::config::SolverConfig;
use super::solution::{Diagnostics, DiscreteSolution, Layout};
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Shape};
use crate::linalg::Triplets;

const NONE: u32 = u32::MAX;
/// Product factors are clamped below at this value; below it the operator is linear.
const CLAMP: f64 = 1e-8;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive lattice directions with entries in `[−w, w]`, one per ± pair.
pub fn stencil_directions(n: usize, w: usize) -> Vec<Vec<i64>> {
    let w = w as i64;
    let side = (2 * w + 1) as usize;
    let mut out = Vec::new();
    for code in 0..side.pow(n as u32) {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let d = (c % side) as i64 - w;
                c /= side;
                d
            })
            .collect();
        let Some(first) = v.iter().find(|x| **x != 0) else { continue };
        if *first < 0 || v.iter().fold(0, |g, x| gcd(g, *x)) != 1 {
            continue;
        }
        out.push(v);
    }
    out.sort_by_key(|v| (v.iter().map(|x| x * x).sum::<i64>(), v.clone()));
    out
}

/// All sets of `n` mutually orthogonal directions, as index lists into `dirs`.
pub fn orthogonal_frames(dirs: &[Vec<i64>], n: usize) -> Vec<Vec<usize>> {
    fn rec(dirs: &[Vec<i64>], n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for j in start..dirs.len() {
            if cur.iter().all(|&i| dirs[i].iter().zip(&dirs[j]).map(|(a, b)| a * b).sum::<i64>() == 0) {
                cur.push(j);
                rec(dirs, n, j + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(dirs, n, 0, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, Copy)]
struct Arm {
    plus: u32,
    minus: u32,
    cp: f64,
    cm: f64,
}

/// Structured grid, optionally folded by the symmetries of the cube (reflections about the
/// center and coordinate permutations).
pub(crate) struct GridProblem {
    domain: ConvexDomain,
    n: usize,
    lo: Vec<f64>,
    step: f64,
    cells: usize,
    /// Unknown id of every grid node (after folding), `NONE` on the boundary.
    unk: Vec<u32>,
    /// Grid multi-index of each unknown's representative.
    reps: Vec<Vec<usize>>,
    /// Number of grid nodes each unknown stands for.
    weight: Vec<usize>,
    dist: Vec<f64>,
    frames: Vec<Vec<usize>>,
    /// `arms[k * dirs + d]`.
    arms: Vec<Arm>,
    ndirs: usize,
}

impl GridProblem {
    pub fn new(domain: &ConvexDomain, cfg: &SolverConfig, fold: bool) -> Result<Self> {
        let Shape::Box { lo, hi } = domain.shape() else {
            return Err(Error::Unsupported("the wide-stencil backend needs a box domain".into()));
        };
        let n = lo.len();
        let ext = hi[0] - lo[0];
        if (1..n).any(|k| ((hi[k] - lo[k]) - ext).abs() > 1e-12 * ext) {
            return Err(Error::Unsupported("the wide-stencil backend needs a cube".into()));
        }
        let cells = (ext / cfg.h).round().max(2.0) as usize;
        let step = ext / cells as f64;
        let side = cells + 1;
        let total = side.pow(n as u32);
        if total > 20_000_000 {
            return Err(Error::Parameter(format!("grid with {total} nodes is too large")));
        }
        let idx = |m: &[usize]| m.iter().fold(0usize, |a, &i| a * side + i);
        let canon = |m: &[usize]| -> Vec<usize> {
            if !fold {
                return m.to_vec();
            }
            let mut r: Vec<usize> = m.iter().map(|&i| i.min(cells - i)).collect();
            r.sort_unstable();
            r
        };
        let mut unk = vec![NONE; total];
        let mut reps = Vec::new();
        let mut weight = Vec::new();
        let mut m = vec![0usize; n];
        // First pass: representatives.
        for code in 0..total {
            let mut c = code;
            for k in (0..n).rev() {
                m[k] = c % side;
                c /= side;
            }
            if m.iter().any(|&i| i == 0 || i == cells) {
                continue;
            }
            let r = canon(&m);
            if r == m {
                unk[code] = reps.len() as u32;
                reps.push(m.clone());
                weight.push(0);
            }
        }
        for code in 0..total {
            let mut c = code;
            for k in (0..n).rev() {
                m[k] = c % side;
                c /= side;
            }
            if m.iter().any(|&i| i == 0 || i == cells) {
                continue;
            }
            let r = canon(&m);
            let id = unk[idx(&r)];
            unk[code] = id;
            weight[id as usize] += 1;
        }
        let dirs = stencil_directions(n, cfg.stencil_width);
        let frames = orthogonal_frames(&dirs, n);
        let ndirs = dirs.len();
        let mut arms = Vec::with_capacity(reps.len() * ndirs);
        for r in &reps {
            for v in &dirs {
                let len = step * (v.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt();
                let arm = |sign: i64| -> (u32, f64) {
                    let mut t: f64 = 1.0;
                    let mut inside = true;
                    let mut target = vec![0usize; n];
                    for k in 0..n {
                        let j = r[k] as i64 + sign * v[k];
                        if j < 0 || j > cells as i64 {
                            inside = false;
                            let room = if sign * v[k] > 0 { (cells - r[k]) as f64 } else { r[k] as f64 };
                            t = t.min(room / v[k].abs() as f64);
                        } else {
                            target[k] = j as usize;
                        }
                    }
                    if inside {
                        (unk[idx(&target)], len)
                    } else {
                        (NONE, t * len)
                    }
                };
                let (plus, hp) = arm(1);
                let (minus, hm) = arm(-1);
                let s = 2.0 / (hp + hm);
                arms.push(Arm { plus, minus, cp: s / hp, cm: s / hm });
            }
        }
        let dist = reps.iter().map(|r| r.iter().map(|&i| i.min(cells - i)).min().unwrap() as f64 * step).collect();
        Ok(GridProblem {
            domain: domain.clone(),
            n,
            lo: lo.clone(),
            step,
            cells,
            unk,
            reps,
            weight,
            dist,
            frames,
            arms,
            ndirs,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn dist(&self) -> &[f64] {
        &self.dist
    }

    fn second_diff(&self, k: usize, d: usize, u: &[f64]) -> f64 {
        let a = self.arms[k * self.ndirs + d];
        let up = if a.plus == NONE { 0.0 } else { u[a.plus as usize] };
        let um = if a.minus == NONE { 0.0 } else { u[a.minus as usize] };
        a.cp * (up - u[k]) + a.cm * (um - u[k])
    }

    fn frame_value(diffs: &[f64]) -> f64 {
        let mut p = 1.0;
        let mut s = 0.0;
        for &d in diffs {
            p *= d.max(CLAMP);
            s += (d - CLAMP).min(0.0);
        }
        p + s
    }

    /// Operator value at every unknown, with the minimizing frame.
    fn operator(&self, u: &[f64]) -> (Vec<f64>, Vec<u32>) {
        let mut vals = vec![0.0; self.len()];
        let mut sel = vec![0u32; self.len()];
        let mut dd = vec![0.0; self.ndirs];
        let mut fd = vec![0.0; self.n];
        for k in 0..self.len() {
            for d in 0..self.ndirs {
                dd[d] = self.second_diff(k, d, u);
            }
            let mut best = f64::INFINITY;
            for (fi, fr) in self.frames.iter().enumerate() {
                for (j, &d) in fr.iter().enumerate() {
                    fd[j] = dd[d];
                }
                let v = Self::frame_value(&fd);
                if v < best {
                    best = v;
                    sel[k] = fi as u32;
                }
            }
            vals[k] = best;
        }
        (vals, sel)
    }

    fn jacobian(&self, u: &[f64], sel: &[u32]) -> Triplets {
        let m = self.len();
        let mut t = Triplets::with_capacity(m, m * (2 * self.n + 1));
        let mut fd = vec![0.0; self.n];
        for k in 0..m {
            let fr = &self.frames[sel[k] as usize];
            for (j, &d) in fr.iter().enumerate() {
                fd[j] = self.second_diff(k, d, u);
            }
            for (j, &d) in fr.iter().enumerate() {
                let g = if fd[j] >= CLAMP {
                    fd.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, x)| x.max(CLAMP)).product::<f64>()
                } else {
                    1.0
                };
                let a = self.arms[k * self.ndirs + d];
                t.push(k, k, -g * (a.cp + a.cm));
                if a.plus != NONE {
                    t.push(k, a.plus as usize, g * a.cp);
                }
                if a.minus != NONE {
                    t.push(k, a.minus as usize, g * a.cm);
                }
            }
        }
        t
    }

    /// Convex start `s(|x − c|² − R²)/2` with `s^n` the mean density.
    pub fn start(&self, f: &[f64]) -> Vec<f64> {
        let mean = f.iter().sum::<f64>() / f.len().max(1) as f64;
        let s = mean.powf(1.0 / self.n as f64);
        let c = self.cells as f64 / 2.0;
        let r2 = self.n as f64 * c * c;
        self.reps
            .iter()
            .map(|r| {
                let q: f64 = r.iter().map(|&i| (i as f64 - c).powi(2)).sum();
                0.5 * s * (q - r2) * self.step * self.step
            })
            .collect()
    }

    /// Newton with backtracking on the residual `MA(u) − f`.
    pub fn solve(&self, f: &[f64], u: &mut [f64], cfg: &SolverConfig) -> Result<(usize, f64)> {
        let scale = f.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-300);
        let tol = cfg.mass_tol * scale;
        let resid = |vals: &[f64]| -> Vec<f64> { vals.iter().zip(f).map(|(a, b)| a - b).collect() };
        let ninf = |r: &[f64]| r.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let n2 = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (vals, mut sel) = self.operator(u);
        let mut r = resid(&vals);
        let mut history = vec![ninf(&r)];
        for it in 0..cfg.max_iterations {
            if ninf(&r) <= tol {
                return Ok((it, ninf(&r)));
            }
            let jac = self.jacobian(u, &sel);
            let neg: Vec<f64> = r.iter().map(|x| -x).collect();
            let delta = jac.solve_lu(&neg)?;
            let base = u.to_vec();
            let r0 = n2(&r);
            let mut tau = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                for i in 0..u.len() {
                    u[i] = base[i] + tau * delta[i];
                }
                let (v, s) = self.operator(u);
                let rn = resid(&v);
                if n2(&rn) <= (1.0 - 1e-4 * tau) * r0 {
                    r = rn;
                    sel = s;
                    accepted = true;
                    break;
                }
                tau *= 0.5;
            }
            history.push(ninf(&r));
            if !accepted {
                u.copy_from_slice(&base);
                return Err(Error::Convergence { iterations: it + 1, residual: ninf(&r), history });
            }
        }
        if ninf(&r) <= tol {
            return Ok((cfg.max_iterations, ninf(&r)));
        }
        Err(Error::Convergence { iterations: cfg.max_iterations, residual: ninf(&r), history })
    }

    /// Expand to the full grid; node masses are `MA(u) · h^n`.
    pub fn solution(&self, u: &[f64], _f: &[f64], diagnostics: Diagnostics) -> DiscreteSolution {
        let (ma, _) = self.operator(u);
        let side = self.cells + 1;
        let total = side.pow(self.n as u32);
        let vol = self.step.powi(self.n as i32);
        let mut nodes = Vec::with_capacity(total);
        let mut boundary = Vec::with_capacity(total);
        let mut values = Vec::with_capacity(total);
        let mut masses = Vec::with_capacity(total);
        let mut m = vec![0usize; self.n];
        for code in 0..total {
            let mut c = code;
            for k in (0..self.n).rev() {
                m[k] = c % side;
                c /= side;
            }
            nodes.push((0..self.n).map(|k| self.lo[k] + m[k] as f64 * self.step).collect());
            let id = self.unk[code];
            boundary.push(id == NONE);
            if id == NONE {
                values.push(0.0);
                masses.push(0.0);
            } else {
                values.push(u[id as usize]);
                masses.push(ma[id as usize] * vol);
            }
        }
        let mut diagnostics = diagnostics;
        diagnostics.target_mass = _f.iter().zip(&self.weight).map(|(f, w)| f * *w as f64).sum::<f64>() * vol;
        DiscreteSolution {
            domain: self.domain.clone(),
            h: self.step,
            layout: Layout::Grid {
                lo: self.lo.clone(),
                step: vec![self.step; self.n],
                cells: vec![self.cells; self.n],
            },
            nodes,
            boundary,
            values,
            masses,
            diagnostics,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_counts() {
        let d2 = stencil_directions(2, 2);
        assert_eq!(d2.len(), 8);
        assert_eq!(orthogonal_frames(&d2, 2).len(), 4);
        let d3 = stencil_directions(3, 1);
        assert_eq!(d3.len(), 13);
        for f in orthogonal_frames(&d3, 3) {
            assert_eq!(f.len(), 3);
        }
    }

    #[test]
    fn folding_matches_full_grid() {
        let dom = ConvexDomain::unit_cube(2).unwrap();
        let cfg = SolverConfig { h: 1.0 / 12.0, ..SolverConfig::with_backend(super::super::Backend::WideStencil, 0.1) };
        let full = GridProblem::new(&dom, &cfg, false).unwrap();
        let fold = GridProblem::new(&dom, &cfg, true).unwrap();
        assert_eq!(fold.len(), 21);
        let (f1, f2) = (vec![1.0; full.len()], vec![1.0; fold.len()]);
        let (mut u1, mut u2) = (full.start(&f1), fold.start(&f2));
        full.solve(&f1, &mut u1, &cfg).unwrap();
        fold.solve(&f2, &mut u2, &cfg).unwrap();
        let s1 = full.solution(&u1, &f1, Diagnostics::default());
        let s2 = fold.solution(&u2, &f2, Diagnostics::default());
        for (a, b) in s1.values.iter().zip(&s2.values) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
