use super::fd::{one_sided_derivative, Evaluable};
use super::fit::Model;
use crate::error::{param, Result};
use crate::geometry::{normal_probe_at, NormalProbe};
use serde::{Deserialize, Serialize};

/// Where and how far to probe along a facet normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub facet: usize,
    /// Number of halvings; the probe has `levels + 1` points.
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// Largest distance; defaults to a tenth of the facet inradius for closed forms and to
    /// `2^levels` mesh widths for discrete solutions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d0: Option<f64>,
    /// Facet point the probe starts from; defaults to the facet centroid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<f64>>,
}

fn default_levels() -> usize {
    6
}

impl ProbeSpec {
    pub fn facet(facet: usize) -> Self {
        ProbeSpec { facet, levels: default_levels(), d0: None, anchor: None }
    }

    /// Resolve against a domain; `h` is the mesh width of a discrete solution.
    pub fn resolve(&self, f: &dyn Evaluable, h: Option<f64>) -> Result<NormalProbe> {
        let dom = f.domain();
        let facet = dom.facet(self.facet)?;
        let d0 = match (self.d0, h) {
            (Some(d), _) => d,
            (None, Some(h)) => h * 2f64.powi(self.levels as i32),
            (None, None) => 0.1 * facet.inradius,
        };
        let anchor = self.anchor.clone().unwrap_or_else(|| facet.centroid.clone());
        normal_probe_at(dom, self.facet, &anchor, self.levels, d0, 1.0)
    }
}

/// Samples `(d, |u|)` or `(d, |D_ν u|)` along a probe, largest distance first.
pub fn probe_samples(f: &dyn Evaluable, probe: &NormalProbe, model: Model) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(probe.distances.len());
    for (d, x) in probe.distances.iter().zip(probe.points()) {
        let v = match model {
            Model::PowerLaw | Model::LogLipschitz => f.value(&x)?.abs(),
            // One-sided difference towards the interior, step d/4.
            Model::GradientLog => one_sided_derivative(f, &x, &probe.normal, d / 4.0)?.abs(),
        };
        if !v.is_finite() {
            return param(format!("non-finite probe value at d = {d}"));
        }
        out.push((*d, v));
    }
    Ok(out)
}
