//! Run configuration for `dequant flow`, loadable from JSON and overridable by flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Quantum,
    Simplex,
    Pi,
    Contraction,
}

impl FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quantum" => Ok(System::Quantum),
            "simplex" => Ok(System::Simplex),
            "pi" => Ok(System::Pi),
            "contraction" => Ok(System::Contraction),
            other => Err(format!("unknown system {other:?}; expected quantum, simplex, pi or contraction")),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Quantum => "quantum",
            System::Simplex => "simplex",
            System::Pi => "pi",
            System::Contraction => "contraction",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}; expected csv or json")),
        }
    }
}

/// Generators are coefficient lists: operator-basis coordinates for the
/// quantum system (length n²), p-chart coefficients otherwise (length 3).
///
/// * quantum: field `X_a + 𝕐_b`, `start` holds the coordinates of `ρ`
/// * simplex: field `X_a + Y_b`
/// * pi: field `Π(df_a, ·)`
/// * contraction: field `X_a` of the bivector at `lambda`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: System,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub a: Vec<f64>,
    #[serde(default)]
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub t_max: f64,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is plain data")
    }

    /// Dimension of the system, with the quantum default `n = 2`.
    pub fn dim(&self) -> usize {
        match self.system {
            System::Quantum => self.n.unwrap_or(2),
            _ => 3,
        }
    }

    /// Length of coefficient and state vectors.
    pub fn coefficient_len(&self) -> usize {
        match self.system {
            System::Quantum => self.dim() * self.dim(),
            _ => 3,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        match (self.system, self.n) {
            (System::Quantum, Some(n)) if !(2..=8).contains(&n) => return usage(format!("n must be in 2..=8, got {n}")),
            (System::Quantum, _) | (_, None) | (_, Some(3)) => {}
            (s, Some(n)) => return usage(format!("system {s} has n = 3, got {n}")),
        }
        let len = self.coefficient_len();
        for (name, v) in [("a", &self.a), ("b", &self.b)] {
            if !v.is_empty() && v.len() != len {
                return usage(format!("{name} needs {len} coefficients for system {}, got {}", self.system, v.len()));
            }
        }
        if !self.b.is_empty() && matches!(self.system, System::Pi | System::Contraction) {
            return usage(format!("system {} takes no b coefficients", self.system));
        }
        if let Some(s) = &self.start {
            if s.len() != len {
                return usage(format!("start needs {len} entries, got {}", s.len()));
            }
        }
        if let Some(l) = self.lambda {
            if self.system != System::Contraction {
                return usage("lambda only applies to the contraction system".into());
            }
            if !(0.0..=1.0).contains(&l) {
                return usage(format!("lambda must lie in [0, 1], got {l}"));
            }
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return usage(format!("t_max must be finite and positive, got {}", self.t_max));
        }
        if self.steps == 0 {
            return usage("steps must be at least 1".into());
        }
        let all = self.a.iter().chain(&self.b).chain(self.start.iter().flatten());
        if all.copied().any(|x: f64| !x.is_finite()) {
            return usage("coefficients must be finite".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_idempotent() {
        let cfg = RunConfig {
            system: System::Quantum,
            n: Some(2),
            a: vec![0.0, 0.0, 0.0, 1.0],
            b: vec![],
            start: Some(vec![std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0, 0.0]),
            lambda: None,
            t_max: 1.0,
            steps: 100,
            out: Some("traj.csv".into()),
            format: Format::Json,
        };
        let once = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(once, cfg);
        assert_eq!(once.to_json(), cfg.to_json());
    }

    #[test]
    fn rejects_unknown_fields_and_bad_lengths() {
        assert!(RunConfig::from_json(r#"{"system":"pi","t_max":1,"steps":1,"colour":1}"#).is_err());
        let cfg = RunConfig::from_json(r#"{"system":"simplex","a":[1,0],"t_max":1,"steps":1}"#).unwrap();
        assert!(cfg.validate().is_err());
        let cfg = RunConfig::from_json(r#"{"system":"quantum","n":9,"t_max":1,"steps":1}"#).unwrap();
        assert!(cfg.validate().is_err());
    }
}
