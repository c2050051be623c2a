use crate::error::{param, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Exact subgradient cells of the convex envelope over planar nodes.
    Geometric,
    /// Monotone wide-stencil differences on a box grid, any dimension.
    WideStencil,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Geometric => "geo",
            Backend::WideStencil => "fd",
        })
    }
}

impl FromStr for Backend {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geo" | "geometric" => Ok(Backend::Geometric),
            "fd" | "wide-stencil" => Ok(Backend::WideStencil),
            _ => param(format!("unknown backend '{s}' (expected geo or fd)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub backend: Backend,
    /// Mesh width.
    pub h: f64,
    /// Newton stops when every node's mass error is below `mass_tol · max target`.
    pub mass_tol: f64,
    pub max_iterations: usize,
    /// Picard blending factor.
    pub damping: f64,
    /// Picard stops when the sup-norm change falls below `picard_tol · sup|u|`.
    pub picard_tol: f64,
    pub max_picard: usize,
    /// Floor for singular right-hand sides: `floor_scale · h^{2/(n−q)}`.
    pub floor_scale: f64,
    /// Wide-stencil reach.
    pub stencil_width: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            backend: Backend::Geometric,
            h: 1.0 / 32.0,
            mass_tol: 1e-9,
            max_iterations: 200,
            damping: 0.5,
            picard_tol: 1e-6,
            max_picard: 400,
            floor_scale: 0.1,
            stencil_width: 2,
        }
    }
}

impl SolverConfig {
    pub fn with_backend(backend: Backend, h: f64) -> Self {
        SolverConfig { backend, h, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return param(format!("mesh width must be positive (h = {})", self.h));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return param(format!("damping must lie in (0, 1] (got {})", self.damping));
        }
        if self.stencil_width < 2 {
            return param(format!("stencil width must be at least 2 (got {})", self.stencil_width));
        }
        if !(self.mass_tol > 0.0 && self.picard_tol > 0.0 && self.floor_scale > 0.0) {
            return param("tolerances and floor scale must be positive");
        }
        if self.max_iterations == 0 || self.max_picard == 0 {
            return param("iteration limits must be positive");
        }
        Ok(())
    }

    /// Floor `ε` used for `|u|^q` in dimension `n`.
    pub fn floor(&self, n: usize, q: f64) -> f64 {
        self.floor_scale * self.h.powf(2.0 / (n as f64 - q))
    }
}
