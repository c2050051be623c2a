use super::triangulation::RegularTriangulation;
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

pub const SOLUTION_SCHEMA_VERSION: u32 = 1;

/// How nodes are arranged; grids allow multilinear interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Layout {
    Scattered,
    /// Nodes `lo + i·step`, `i ∈ [0, cells]^n`, in row-major order (last index fastest).
    Grid {
        lo: Vec<f64>,
        step: Vec<f64>,
        cells: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Diagnostics {
    pub backend: String,
    pub iterations: usize,
    pub residual: f64,
    #[serde(default)]
    pub picard_history: Vec<f64>,
    /// Distance from each gas point to the node carrying its atom.
    #[serde(default)]
    pub snap_distances: Vec<f64>,
    pub target_mass: f64,
}

/// Nodal values of a discrete convex solution.
#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    pub domain: ConvexDomain,
    pub h: f64,
    pub layout: Layout,
    pub nodes: Vec<Vec<f64>>,
    pub boundary: Vec<bool>,
    pub values: Vec<f64>,
    /// Discrete Monge-Ampère mass per node; zero on the boundary.
    pub masses: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl DiscreteSolution {
    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dist(&self, i: usize) -> f64 {
        if self.boundary[i] {
            0.0
        } else {
            self.domain.dist_to_boundary(&self.nodes[i]).unwrap_or(0.0)
        }
    }

    /// Interpolant at `x`: multilinear on grids, the convex envelope elsewhere.
    pub fn interpolate(&self, x: &[f64]) -> Result<f64> {
        Ok(self.interpolator()?.eval(x)?)
    }

    pub fn interpolator(&self) -> Result<Interpolator<'_>> {
        match &self.layout {
            Layout::Grid { .. } => Ok(Interpolator { sol: self, planar: None }),
            Layout::Scattered => {
                if self.dim() != 2 {
                    return Err(Error::Unsupported("scattered interpolation is planar".into()));
                }
                let pts: Vec<[f64; 2]> = self.nodes.iter().map(|p| [p[0], p[1]]).collect();
                let tri = RegularTriangulation::new(&pts, &self.values);
                Ok(Interpolator { sol: self, planar: Some((pts, tri.mesh())) })
            }
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# sharpbound solution v{SOLUTION_SCHEMA_VERSION}")?;
        writeln!(w, "# h={}", self.h)?;
        writeln!(w, "# layout={}", serde_json::to_string(&self.layout)?)?;
        writeln!(w, "# domain={}", serde_json::to_string(&self.domain.to_file())?)?;
        writeln!(w, "# diagnostics={}", serde_json::to_string(&self.diagnostics)?)?;
        let n = self.dim();
        let mut head: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
        head.extend(["value", "mass", "dist", "boundary"].map(String::from));
        writeln!(w, "{}", head.join(","))?;
        for i in 0..self.len() {
            let mut row: Vec<String> = self.nodes[i].iter().map(|x| format!("{x:e}")).collect();
            row.push(format!("{:e}", self.values[i]));
            row.push(format!("{:e}", self.masses[i]));
            row.push(format!("{:e}", self.dist(i)));
            row.push(if self.boundary[i] { "1" } else { "0" }.into());
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let bad = |m: String| Error::Validation(m);
        let mut h = None;
        let mut layout = None;
        let mut domain = None;
        let mut diagnostics = Diagnostics::default();
        let mut version = None;
        let mut header_seen = false;
        let (mut nodes, mut boundary, mut values, mut masses) = (vec![], vec![], vec![], vec![]);
        for (ln, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let meta = meta.trim();
                if let Some(v) = meta.strip_prefix("sharpbound solution v") {
                    version = v.parse::<u32>().ok();
                } else if let Some((k, v)) = meta.split_once('=') {
                    match k {
                        "h" => h = v.parse::<f64>().ok(),
                        "layout" => layout = Some(serde_json::from_str::<Layout>(v)?),
                        "domain" => domain = Some(ConvexDomain::from_file(&serde_json::from_str(v)?)?),
                        "diagnostics" => diagnostics = serde_json::from_str(v)?,
                        _ => {}
                    }
                }
                continue;
            }
            if !header_seen {
                header_seen = true;
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            let n =
                domain.as_ref().map(|d: &ConvexDomain| d.dim()).ok_or_else(|| bad("domain header missing".into()))?;
            if cells.len() != n + 4 {
                return Err(bad(format!("line {}: expected {} columns", ln + 1, n + 4)));
            }
            let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("line {}: bad number '{s}'", ln + 1)));
            nodes.push(cells[..n].iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?);
            values.push(num(cells[n])?);
            masses.push(num(cells[n + 1])?);
            boundary.push(cells[n + 3].trim() == "1");
        }
        match version {
            Some(SOLUTION_SCHEMA_VERSION) => {}
            Some(v) => return Err(bad(format!("unsupported solution schema v{v}"))),
            None => return Err(bad("missing solution schema line".into())),
        }
        Ok(DiscreteSolution {
            domain: domain.ok_or_else(|| bad("domain header missing".into()))?,
            h: h.ok_or_else(|| bad("h header missing".into()))?,
            layout: layout.unwrap_or(Layout::Scattered),
            nodes,
            boundary,
            values,
            masses,
            diagnostics,
        })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_csv(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(f))
    }
}

/// Reusable point evaluator.
pub struct Interpolator<'a> {
    sol: &'a DiscreteSolution,
    planar: Option<(Vec<[f64; 2]>, super::triangulation::TriMesh)>,
}

impl Interpolator<'_> {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let sol = self.sol;
        if !sol.domain.contains_closed(x) {
            return Err(Error::OutsideDomain { point: x.to_vec() });
        }
        if let Some((pts, mesh)) = &self.planar {
            let (t, w) = mesh.locate(pts, [x[0], x[1]]).ok_or_else(|| Error::OutsideDomain { point: x.to_vec() })?;
            let v = mesh.verts[t];
            return Ok(w[0] * sol.values[v[0]] + w[1] * sol.values[v[1]] + w[2] * sol.values[v[2]]);
        }
        let Layout::Grid { lo, step, cells } = &sol.layout else { unreachable!() };
        let n = lo.len();
        let mut base = vec![0usize; n];
        let mut frac = vec![0.0; n];
        for k in 0..n {
            let s = ((x[k] - lo[k]) / step[k]).clamp(0.0, cells[k] as f64);
            let i = (s.floor() as usize).min(cells[k] - 1);
            base[k] = i;
            frac[k] = s - i as f64;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << n) {
            let mut idx = 0usize;
            let mut w = 1.0;
            for k in 0..n {
                let bit = (corner >> k) & 1;
                idx = idx * (cells[k] + 1) + base[k] + bit;
                w *= if bit == 1 { frac[k] } else { 1.0 - frac[k] };
            }
            if w != 0.0 {
                acc += w * sol.values[idx];
            }
        }
        Ok(acc)
    }
}
