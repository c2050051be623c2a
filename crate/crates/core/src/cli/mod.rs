//! Command-line front end and the experiment runner.

mod experiment;

pub use experiment::{
    bundled_experiment, bundled_experiments, run_experiment, solve_any, DomainRef, ExpectedRate, ExperimentConfig,
    ExperimentOutcome, ExperimentReport, HessianCheck, OracleOutcome, Outputs, RateOracle, SolveSummary, Source,
    EXPERIMENT_SCHEMA_VERSION, HESSIAN_CHECK_TOL, OUT_DIR_ENV, REPORT_SCHEMA_VERSION,
};

use crate::analysis::{abreu_bootstrap_check, fit_exponent, probe_samples, Model, ProbeSpec, SolutionField};
use crate::closed_forms::{
    surface_tension_t, surface_tension_t_hessian, verify_family_inequality, ClosedFormFunction, Family,
};
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use crate::solver::{Backend, BoundaryData, DiscreteSolution, RhsSpec, SolverConfig};
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "sharpbound", version, about = "Boundary growth of Monge-Ampere solutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check closed-form inequalities or the Abreu comparison machinery.
    Verify {
        #[command(subcommand)]
        what: VerifyTarget,
    },
    /// Solve a Dirichlet problem and write the solution CSV.
    Solve {
        /// Domain JSON file.
        #[arg(long)]
        domain: PathBuf,
        /// const:m | distpow:m,gamma | upow:q[,eps] | measure:gas=[(x,y,c),...]
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value = "geo")]
        backend: Backend,
        #[arg(long)]
        h: f64,
        /// Comma-separated boundary values, one per polygon vertex.
        #[arg(long)]
        data: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a boundary growth model to a solution along a facet normal.
    FitExponent {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        facet: usize,
        #[arg(long, default_value = "power")]
        model: Model,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        d0: Option<f64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate the lozenge surface tension.
    SurfaceTension {
        /// Points `x,y`; repeatable.
        #[arg(long = "at")]
        at: Vec<String>,
        /// Write values on an `m × m` grid of the triangle to this CSV.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment from a config file or a bundled name.
    Run {
        #[arg(long, conflicts_with = "name", required_unless_present = "name")]
        config: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
    /// List bundled experiments.
    ListExperiments,
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    ClosedForms {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// `k=v` pairs separated by commas.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    Abreu {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        diam: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for kv in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Validation(format!("expected k=v, got '{kv}'")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Validation(format!("bad number in '{kv}'")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn parse_point(s: &str) -> Result<[f64; 2]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Validation(format!("bad point '{s}'")))?;
    match v[..] {
        [x, y] => Ok([x, y]),
        _ => Err(Error::Validation(format!("point '{s}' needs two coordinates"))),
    }
}

/// Pretty JSON to a file, or stdout when no path is given.
fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    match path {
        Some(p) => std::fs::write(p, s)?,
        None => std::io::stdout().write_all(s.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct FitReport<'a> {
    schema_version: u32,
    facet: usize,
    #[serde(flatten)]
    fit: &'a crate::analysis::ExponentFit,
}

#[derive(Serialize)]
struct PointValue {
    x: [f64; 2],
    value: f64,
    gradient: [f64; 2],
    hessian_det: f64,
}

/// Execute a parsed command; the result is the process exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { what: VerifyTarget::ClosedForms { family, n, params, samples, report } } => {
            let fam: Family = family.parse()?;
            let f = ClosedFormFunction::from_params(fam, n, &parse_params(&params)?)?;
            let r = verify_family_inequality(&f, samples)?;
            emit(&r, report.as_deref())?;
            Ok(if r.pass { 0 } else { 1 })
        }
        Command::Verify { what: VerifyTarget::Abreu { n, diam, report } } => {
            let r = abreu_bootstrap_check(n, diam)?;
            emit(&r, report.as_deref())?;
            Ok(if r.pass { 0 } else { 1 })
        }
        Command::Solve { domain, rhs, backend, h, data, out } => {
            let dom = ConvexDomain::from_json(&std::fs::read_to_string(&domain)?)?;
            let rhs: RhsSpec = rhs.parse()?;
            let data = match data {
                None => BoundaryData::Zero,
                Some(s) => BoundaryData::VertexAffine {
                    values: s
                        .split(',')
                        .map(|t| t.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Validation(format!("bad boundary values '{s}'")))?,
                },
            };
            let cfg = SolverConfig::with_backend(backend, h);
            let sol = solve_any(&dom, &data, &rhs, &cfg)?;
            sol.save(&out)?;
            eprintln!(
                "{} nodes, {} iterations, residual {:.3e}",
                sol.len(),
                sol.diagnostics.iterations,
                sol.diagnostics.residual
            );
            Ok(0)
        }
        Command::FitExponent { solution, facet, model, levels, d0, report } => {
            let sol = DiscreteSolution::load(&solution)?;
            let field = SolutionField::new(&sol)?;
            let spec = ProbeSpec { facet, levels, d0, anchor: None };
            let probe = spec.resolve(&field, Some(sol.h))?;
            let fit = fit_exponent(&probe_samples(&field, &probe, model)?, model)?;
            emit(&FitReport { schema_version: REPORT_SCHEMA_VERSION, facet, fit: &fit }, report.as_deref())?;
            Ok(0)
        }
        Command::SurfaceTension { at, grid, out } => {
            let mut pts = Vec::new();
            for s in &at {
                let x = parse_point(s)?;
                let (value, gradient) = surface_tension_t(x)?;
                let hs = surface_tension_t_hessian(x)?;
                let hessian_det = hs[0][0] * hs[1][1] - hs[0][1] * hs[1][0];
                pts.push(PointValue { x, value, gradient, hessian_det });
            }
            if let Some(m) = grid {
                let path = out.ok_or_else(|| Error::Validation("--grid needs --out".into()))?;
                let mut s = String::from("x,y,value\n");
                for i in 0..=m {
                    for j in 0..=m - i {
                        let x = [i as f64 / m as f64, j as f64 / m as f64];
                        let v = crate::closed_forms::surface_tension_t_closure(x)?;
                        s += &format!("{:e},{:e},{v:e}\n", x[0], x[1]);
                    }
                }
                std::fs::write(path, s)?;
            }
            if !pts.is_empty() {
                emit(&pts, None)?;
            }
            Ok(0)
        }
        Command::Run { config, name } => {
            let (cfg, base) = match (config, name) {
                (Some(p), _) => {
                    let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
                    (ExperimentConfig::load(&p)?, base)
                }
                (None, Some(n)) => (bundled_experiment(&n)?, std::env::current_dir()?),
                (None, None) => return Err(Error::Validation("run needs --config or --name".into())),
            };
            let out = run_experiment(&cfg, &base)?;
            let r = &out.report;
            match (&r.oracle, &r.failure_stage) {
                (Some(o), _) => eprintln!(
                    "{}: measured {:.4} against [{:.4}, {:.4}] ({}) -> {}",
                    r.name,
                    o.measured,
                    o.lower,
                    o.upper,
                    o.name,
                    if r.pass { "pass" } else { "FAIL" }
                ),
                (None, Some(stage)) => eprintln!("{}: failed at {stage}: {}", r.name, r.error.as_deref().unwrap_or("")),
                (None, None) => {}
            }
            println!("{}", out.report_path.display());
            Ok(if r.pass { 0 } else { 1 })
        }
        Command::ListExperiments => {
            for n in bundled_experiments() {
                println!("{n}");
            }
            Ok(0)
        }
    }
}

/// Parse `args` and run; errors print to stderr with exit code 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
