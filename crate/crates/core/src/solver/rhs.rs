use crate::error::{param, Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Dirac atom `c · δ_at`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasPoint {
    pub at: Vec<f64>,
    pub c: f64,
}

/// Right-hand side of `det D²u = μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RhsSpec {
    Constant {
        m: f64,
    },
    /// `m · dist(x, ∂Ω)^γ`.
    DistPower {
        m: f64,
        gamma: f64,
    },
    /// `max(|u|, ε)^q`; a missing floor is taken from the solver's schedule.
    SolutionPower {
        q: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        floor: Option<f64>,
    },
    /// Lebesgue measure plus atoms.
    Measure {
        gas: Vec<GasPoint>,
    },
}

impl RhsSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            RhsSpec::Constant { m } if !(*m > 0.0 && m.is_finite()) => {
                param(format!("mass density must be positive (m = {m})"))
            }
            RhsSpec::DistPower { m, gamma } if !(*m > 0.0 && *gamma >= 0.0 && gamma.is_finite()) => {
                param(format!("distpow needs m > 0 and gamma >= 0 (m = {m}, gamma = {gamma})"))
            }
            RhsSpec::SolutionPower { q, floor } => {
                if !(q.is_finite() && *q < dim as f64) {
                    return param(format!("upow needs q < n (q = {q}, n = {dim})"));
                }
                if let Some(e) = floor {
                    if !(*e > 0.0) {
                        return param(format!("floor must be positive (got {e})"));
                    }
                }
                Ok(())
            }
            RhsSpec::Measure { gas } => {
                for g in gas {
                    if g.at.len() != dim {
                        return param(format!("gas point {:?} has the wrong dimension", g.at));
                    }
                    if !(g.c > 0.0 && g.c.is_finite()) {
                        return param(format!("gas weight must be positive (c = {})", g.c));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Absolutely continuous density at a point at distance `dist` from the boundary.
    /// Not meaningful for `SolutionPower`.
    pub fn density(&self, dist: f64) -> f64 {
        match self {
            RhsSpec::Constant { m } => *m,
            RhsSpec::DistPower { m, gamma } => m * dist.powf(*gamma),
            RhsSpec::Measure { .. } => 1.0,
            RhsSpec::SolutionPower { .. } => f64::NAN,
        }
    }

    /// Invariant under the reflections of a box about its center.
    pub fn is_box_symmetric(&self) -> bool {
        !matches!(self, RhsSpec::Measure { gas } if !gas.is_empty())
    }
}

impl fmt::Display for RhsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhsSpec::Constant { m } => write!(f, "const:{m}"),
            RhsSpec::DistPower { m, gamma } => write!(f, "distpow:{m},{gamma}"),
            RhsSpec::SolutionPower { q, floor: None } => write!(f, "upow:{q}"),
            RhsSpec::SolutionPower { q, floor: Some(e) } => write!(f, "upow:{q},{e}"),
            RhsSpec::Measure { gas } => {
                write!(f, "measure:gas=[")?;
                for (i, g) in gas.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    let c: Vec<String> = g.at.iter().map(|x| x.to_string()).collect();
                    write!(f, "({},{})", c.join(","), g.c)?;
                }
                write!(f, "]")
            }
        }
    }
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parameter(format!("bad number '{t}'")))).collect()
}

impl FromStr for RhsSpec {
    type Err = Error;

    /// `const:m`, `distpow:m,gamma`, `upow:q[,floor]`, `measure:gas=[(x,y,c),...]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').ok_or_else(|| Error::Parameter(format!("rhs '{s}' lacks a kind")))?;
        match kind {
            "const" => match numbers(rest)?.as_slice() {
                [m] => Ok(RhsSpec::Constant { m: *m }),
                _ => param("const takes one number"),
            },
            "distpow" => match numbers(rest)?.as_slice() {
                [m, g] => Ok(RhsSpec::DistPower { m: *m, gamma: *g }),
                _ => param("distpow takes m,gamma"),
            },
            "upow" => match numbers(rest)?.as_slice() {
                [q] => Ok(RhsSpec::SolutionPower { q: *q, floor: None }),
                [q, e] => Ok(RhsSpec::SolutionPower { q: *q, floor: Some(*e) }),
                _ => param("upow takes q[,floor]"),
            },
            "measure" => {
                let list = rest
                    .trim()
                    .strip_prefix("gas=")
                    .ok_or_else(|| Error::Parameter("measure expects gas=[...]".into()))?
                    .trim();
                let inner = list
                    .strip_prefix('[')
                    .and_then(|l| l.strip_suffix(']'))
                    .ok_or_else(|| Error::Parameter("gas list must be bracketed".into()))?;
                let mut gas = Vec::new();
                let mut rest = inner.trim();
                while !rest.is_empty() {
                    let open =
                        rest.strip_prefix('(').ok_or_else(|| Error::Parameter(format!("expected '(' in '{rest}'")))?;
                    let close = open.find(')').ok_or_else(|| Error::Parameter("unclosed gas tuple".into()))?;
                    let v = numbers(&open[..close])?;
                    if v.len() < 2 {
                        return param("gas tuple needs coordinates and a weight");
                    }
                    let (at, c) = v.split_at(v.len() - 1);
                    gas.push(GasPoint { at: at.to_vec(), c: c[0] });
                    rest = open[close + 1..].trim_start().trim_start_matches(',').trim_start();
                }
                Ok(RhsSpec::Measure { gas })
            }
            _ => param(format!("unknown rhs kind '{kind}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["const:1", "distpow:2,0.5", "upow:-1", "upow:1,0.001", "measure:gas=[(0.5,0.5,0.5),(0.25,0.75,1)]"] {
            let r: RhsSpec = s.parse().unwrap();
            let back: RhsSpec = r.to_string().parse().unwrap();
            assert_eq!(r, back, "{s}");
        }
        let r: RhsSpec = "measure:gas=[]".parse().unwrap();
        assert_eq!(r, RhsSpec::Measure { gas: vec![] });
    }

    #[test]
    fn rejects_bad_input() {
        assert!("foo:1".parse::<RhsSpec>().is_err());
        assert!("const:1,2".parse::<RhsSpec>().is_err());
        assert!("measure:(1,2)".parse::<RhsSpec>().is_err());
        assert!(RhsSpec::SolutionPower { q: 2.0, floor: None }.validate(2).is_err());
        assert!(RhsSpec::Constant { m: 0.0 }.validate(2).is_err());
    }
}
