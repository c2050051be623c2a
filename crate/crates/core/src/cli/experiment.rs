//! Reproducible experiments: solve (or evaluate a closed form), probe a facet, fit, and compare
//! against a named rate oracle.

use crate::analysis::{
    fd_hessian_det, fit_exponent, probe_samples, Evaluable, ExponentFit, Model, ProbeSpec, SolutionField,
};
use crate::closed_forms::{ClosedFormFunction, Family};
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, DomainFile};
use crate::solver::{solve_dirichlet, solve_power_rhs, BoundaryData, DiscreteSolution, RhsSpec, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const EXPERIMENT_SCHEMA_VERSION: u32 = 1;
pub const REPORT_SCHEMA_VERSION: u32 = 1;
/// Overrides the output directory of every experiment.
pub const OUT_DIR_ENV: &str = "SHARPBOUND_OUT_DIR";
/// Allowed relative gap between the difference-quotient and exact Hessian determinants. The
/// stencil's O(h²) truncation reaches about 2e-4 at distance 0.1 from the boundary.
pub const HESSIAN_CHECK_TOL: f64 = 1e-3;

/// Built-in rate oracles an experiment may cite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum RateOracle {
    /// Power exponent `2/(n−q)`.
    TwoOverNMinusQ,
    /// Power exponent `2/n`.
    TwoOverN,
    /// The log-Lipschitz model must beat the power model's residual by a fifth.
    LogLipschitz,
    /// Normal derivative linear in `log(1/d)`.
    GradientLog,
    /// Power exponent in `(2/(n−q) − tol, 1]`.
    Band,
}

impl RateOracle {
    pub const ALL: [RateOracle; 5] = [
        RateOracle::TwoOverNMinusQ,
        RateOracle::TwoOverN,
        RateOracle::LogLipschitz,
        RateOracle::GradientLog,
        RateOracle::Band,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RateOracle::TwoOverNMinusQ => "two-over-n-minus-q",
            RateOracle::TwoOverN => "two-over-n",
            RateOracle::LogLipschitz => "log-lipschitz",
            RateOracle::GradientLog => "gradient-log",
            RateOracle::Band => "band",
        }
    }

    pub fn model(self) -> Model {
        match self {
            RateOracle::TwoOverNMinusQ | RateOracle::TwoOverN | RateOracle::Band => Model::PowerLaw,
            RateOracle::LogLipschitz => Model::LogLipschitz,
            RateOracle::GradientLog => Model::GradientLog,
        }
    }
}

impl fmt::Display for RateOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RateOracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RateOracle::ALL.into_iter().find(|o| o.name() == s).ok_or_else(|| {
            let names: Vec<&str> = RateOracle::ALL.iter().map(|o| o.name()).collect();
            Error::Validation(format!("unknown rate oracle '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

impl TryFrom<String> for RateOracle {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RateOracle> for String {
    fn from(o: RateOracle) -> String {
        o.name().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedRate {
    pub oracle: RateOracle,
    /// Absolute tolerance on the fitted rate.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Target slope for `gradient-log`; when absent only the linear structure is checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Smallest acceptable R² for `gradient-log`.
    #[serde(default = "default_min_r2")]
    pub min_r2: f64,
}

fn default_tolerance() -> f64 {
    0.05
}

fn default_min_r2() -> f64 {
    0.99
}

/// A domain given inline or as a path relative to the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainRef {
    Path(PathBuf),
    Inline(DomainFile),
}

/// What produces the probed function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    /// Discrete solve with zero or vertex-affine data.
    Solve {
        rhs: String,
        #[serde(default)]
        data: BoundaryData,
        #[serde(default)]
        solver: SolverConfig,
    },
    /// Closed-form function; its own domain is used.
    ClosedForm {
        family: String,
        n: usize,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Outputs {
    /// Output directory, relative to the config file; `SHARPBOUND_OUT_DIR` wins.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<PathBuf>,
    /// Solution CSV, written only when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainRef>,
    pub source: Source,
    pub probe: ProbeSpec,
    pub expected: ExpectedRate,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != EXPERIMENT_SCHEMA_VERSION {
            return Err(Error::Validation(format!("unsupported experiment schema {}", self.schema_version)));
        }
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(Error::Validation(format!("experiment name '{}' must be [A-Za-z0-9_-]+", self.name)));
        }
        match &self.source {
            Source::Solve { rhs, data, solver } => {
                if self.domain.is_none() {
                    return Err(Error::Validation("a solve needs a domain".into()));
                }
                RhsSpec::from_str(rhs)?;
                solver.validate()?;
                if !data.is_zero() && matches!(RhsSpec::from_str(rhs)?, RhsSpec::SolutionPower { .. }) {
                    return Err(Error::Validation("upow right-hand sides need zero data".into()));
                }
            }
            Source::ClosedForm { family, .. } => {
                Family::from_str(family)?;
                if self.domain.is_some() {
                    return Err(Error::Validation("closed forms carry their own domain".into()));
                }
            }
        }
        let e = &self.expected;
        if !(e.tolerance >= 0.0 && e.tolerance.is_finite()) {
            return Err(Error::Validation("tolerance must be nonnegative".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn q(&self) -> Option<f64> {
        match &self.source {
            Source::Solve { rhs, .. } => match RhsSpec::from_str(rhs).ok()? {
                RhsSpec::Constant { .. } => Some(0.0),
                RhsSpec::SolutionPower { q, .. } => Some(q),
                RhsSpec::DistPower { gamma, .. } => Some(-gamma),
                RhsSpec::Measure { .. } => None,
            },
            Source::ClosedForm { .. } => None,
        }
    }
}

/// Solve with any right-hand side: `upow` goes through the Picard loop.
pub fn solve_any(
    domain: &ConvexDomain,
    data: &BoundaryData,
    rhs: &RhsSpec,
    cfg: &SolverConfig,
) -> Result<DiscreteSolution> {
    match rhs {
        RhsSpec::SolutionPower { q, floor } => {
            rhs.validate(domain.dim())?;
            if !data.is_zero() {
                return Err(Error::Unsupported("upow right-hand sides need zero data".into()));
            }
            let mut cfg = cfg.clone();
            if let Some(e) = floor {
                // Express the absolute floor through the configured schedule.
                cfg.floor_scale = e / cfg.floor(domain.dim(), *q) * cfg.floor_scale;
            }
            solve_power_rhs(domain, *q, &cfg)
        }
        _ => solve_dirichlet(domain, data, rhs, cfg),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub name: RateOracle,
    pub model: Model,
    /// Expected rate, when the oracle fixes one.
    pub expected: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    pub measured: f64,
    /// Power-law residual compared against, for `log-lipschitz`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub competitor_log_rms: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSummary {
    pub nodes: usize,
    pub h: f64,
    pub backend: String,
    pub iterations: usize,
    pub residual: f64,
    pub picard_steps: usize,
    pub sup_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessianCheck {
    pub points: usize,
    pub step: f64,
    pub max_relative_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub name: String,
    pub config_hash: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hessian_check: Option<HessianCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<ExponentFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOutcome>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Where a run wrote its files.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub report: ExperimentReport,
    pub report_path: PathBuf,
    pub samples_path: Option<PathBuf>,
}

const BUNDLED: [(&str, &str); 2] = [
    ("neg-q-2d", include_str!("../../experiments/neg-q-2d.json")),
    ("lozenge-selftest", include_str!("../../experiments/lozenge-selftest.json")),
];

/// Names of the experiments shipped with the crate.
pub fn bundled_experiments() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_experiment(name: &str) -> Result<ExperimentConfig> {
    let (_, src) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Validation(format!("no bundled experiment '{name}'")))?;
    ExperimentConfig::from_json(src)
}

fn resolve_domain(d: &DomainRef, base: &Path) -> Result<ConvexDomain> {
    match d {
        DomainRef::Inline(f) => ConvexDomain::from_file(f),
        DomainRef::Path(p) => ConvexDomain::from_json(&std::fs::read_to_string(base.join(p))?),
    }
}

fn out_dir(cfg: &ExperimentConfig, base: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => base.join(cfg.outputs.dir.clone().unwrap_or_else(|| PathBuf::from("sharpbound-out"))),
    }
}

fn judge(cfg: &ExperimentConfig, n: usize, fit: &ExponentFit, samples: &[(f64, f64)]) -> Result<OracleOutcome> {
    let e = &cfg.expected;
    let nf = n as f64;
    let need_q = || cfg.q().ok_or_else(|| Error::Validation(format!("oracle {} needs a q-dependent rhs", e.oracle)));
    let beta = fit.rate();
    let mut out = OracleOutcome {
        name: e.oracle,
        model: e.oracle.model(),
        expected: None,
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
        measured: beta,
        competitor_log_rms: None,
        pass: false,
    };
    match e.oracle {
        RateOracle::TwoOverNMinusQ | RateOracle::TwoOverN => {
            let q = if e.oracle == RateOracle::TwoOverN { 0.0 } else { need_q()? };
            let target = 2.0 / (nf - q);
            out.expected = Some(target);
            out.lower = target - e.tolerance;
            out.upper = target + e.tolerance;
        }
        RateOracle::Band => {
            let q = need_q()?;
            out.lower = 2.0 / (nf - q) - e.tolerance;
            out.upper = 1.0;
        }
        RateOracle::LogLipschitz => {
            let power = fit_exponent(samples, Model::PowerLaw)?;
            out.measured = fit.log_rms;
            out.upper = 0.8 * power.log_rms;
            out.lower = 0.0;
            out.competitor_log_rms = Some(power.log_rms);
            out.pass = fit.log_rms <= out.upper;
            return Ok(out);
        }
        RateOracle::GradientLog => {
            if let Some(v) = e.value {
                out.expected = Some(v);
                out.lower = v - e.tolerance;
                out.upper = v + e.tolerance;
            } else {
                out.lower = 0.0;
            }
            out.pass = beta > out.lower && beta <= out.upper && fit.r2 >= e.min_r2;
            return Ok(out);
        }
    }
    // The band is half-open at the bottom.
    out.pass = if e.oracle == RateOracle::Band {
        beta > out.lower && beta <= out.upper
    } else {
        beta >= out.lower && beta <= out.upper
    };
    Ok(out)
}

fn hessian_check(f: &ClosedFormFunction, seed: u64) -> Result<HessianCheck> {
    let dom = f.domain();
    let (lo, hi) = dom.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = 1e-3;
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut tries = 0;
    while count < 100 && tries < 100_000 {
        tries += 1;
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| rng.random_range(*a..*b)).collect();
        if !dom.contains(&x) || dom.dist_to_boundary(&x)? < 0.1 {
            continue;
        }
        let exact = f.eval(&x)?.hessian_det;
        let approx = fd_hessian_det(f, &x, step)?;
        worst = worst.max((approx - exact).abs() / exact.abs().max(1.0));
        count += 1;
    }
    if count == 0 {
        return Err(Error::Geometry("no sample points at distance 0.1 from the boundary".into()));
    }
    Ok(HessianCheck { points: count, step, max_relative_error: worst, pass: worst <= HESSIAN_CHECK_TOL })
}

fn write_samples(path: &Path, name: &str, fit: &ExponentFit, raw: &[(f64, f64)]) -> Result<()> {
    let mut s = String::from("experiment,model,j,d,value,predicted,kept\n");
    for (j, &(d, v)) in raw.iter().enumerate() {
        let kept = fit.dropped != Some((d, v));
        s += &format!("{name},{},{j},{d:e},{v:e},{:e},{kept}\n", fit.model, fit.predict(d));
    }
    std::fs::write(path, s)?;
    Ok(())
}

/// Run an experiment. `base` resolves relative paths in the config. Stage failures yield a
/// failing report (still written); only I/O on the report itself is an error.
pub fn run_experiment(cfg: &ExperimentConfig, base: &Path) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let dir = out_dir(cfg, base);
    std::fs::create_dir_all(&dir)?;
    let report_path =
        dir.join(cfg.outputs.report.clone().unwrap_or_else(|| format!("{}.report.json", cfg.name).into()));
    let samples_path =
        dir.join(cfg.outputs.samples.clone().unwrap_or_else(|| format!("{}.samples.csv", cfg.name).into()));
    let mut report = ExperimentReport {
        schema_version: REPORT_SCHEMA_VERSION,
        name: cfg.name.clone(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        solve: None,
        hessian_check: None,
        fit: None,
        oracle: None,
        pass: false,
        failure_stage: None,
        error: None,
    };
    let mut wrote_samples = false;
    let result = stages(cfg, base, &dir, &mut report, &samples_path, &mut wrote_samples);
    if let Err((stage, e)) = result {
        report.pass = false;
        report.failure_stage = Some(stage.to_string());
        report.error = Some(e.to_string());
    }
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    std::fs::write(&report_path, json)?;
    Ok(ExperimentOutcome { report, report_path, samples_path: wrote_samples.then_some(samples_path) })
}

type Staged<T> = std::result::Result<T, (&'static str, Error)>;

fn at<T>(stage: &'static str, r: Result<T>) -> Staged<T> {
    r.map_err(|e| (stage, e))
}

fn stages(
    cfg: &ExperimentConfig,
    base: &Path,
    dir: &Path,
    report: &mut ExperimentReport,
    samples_path: &Path,
    wrote: &mut bool,
) -> Staged<()> {
    let model = cfg.expected.oracle.model();
    let (raw, n, extra_pass) = match &cfg.source {
        Source::Solve { rhs, data, solver } => {
            let domain = at("domain", resolve_domain(cfg.domain.as_ref().expect("validated"), base))?;
            let rhs = at("solve", RhsSpec::from_str(rhs))?;
            let sol = at("solve", solve_any(&domain, data, &rhs, solver))?;
            report.solve = Some(SolveSummary {
                nodes: sol.len(),
                h: sol.h,
                backend: sol.diagnostics.backend.clone(),
                iterations: sol.diagnostics.iterations,
                residual: sol.diagnostics.residual,
                picard_steps: sol.diagnostics.picard_history.len(),
                sup_abs: sol.sup_abs(),
            });
            if let Some(p) = &cfg.outputs.solution {
                at("output", sol.save(&dir.join(p)))?;
            }
            let field = at("probe", SolutionField::new(&sol))?;
            let probe = at("probe", cfg.probe.resolve(&field, Some(sol.h)))?;
            (at("probe", probe_samples(&field, &probe, model))?, domain.dim(), true)
        }
        Source::ClosedForm { family, n, params } => {
            let fam = at("closed-form", Family::from_str(family))?;
            let f = at("closed-form", ClosedFormFunction::from_params(fam, *n, params))?;
            let check = at("hessian", hessian_check(&f, cfg.seed))?;
            let ok = check.pass;
            report.hessian_check = Some(check);
            let probe = at("probe", cfg.probe.resolve(&f as &dyn Evaluable, None))?;
            (at("probe", probe_samples(&f, &probe, model))?, *n, ok)
        }
    };
    let fit = at("fit", fit_exponent(&raw, model))?;
    at("output", write_samples(samples_path, &cfg.name, &fit, &raw))?;
    *wrote = true;
    let oracle = at("oracle", judge(cfg, n, &fit, &raw))?;
    report.pass = oracle.pass && extra_pass;
    report.fit = Some(fit);
    report.oracle = Some(oracle);
    if !report.pass {
        report.failure_stage = Some(if extra_pass { "oracle" } else { "hessian" }.to_string());
    }
    Ok(())
}
