//! Scenario files.
//!
//! A scenario is a TOML document, schema version 1:
//!
//! ```toml
//! schema = 1
//! bandwidth = 100.0          # eNB bandwidth R
//!
//! [solver]                   # optional, every key optional
//! delta = 1e-3
//! max_iters = 40
//! w_init = 1.0
//! damping = "harmonic"       # "harmonic" (l3) or "exponential" (l1, l2)
//! l3 = 10.0
//!
//! [[ue]]
//! id = 1
//! utility = "sigmoidal"
//! a = 5.0
//! b = 10.0
//!
//! [[ue]]
//! id = 2
//! utility = "logarithmic"
//! k = 15.0
//! r_max = 100.0
//! ```
//!
//! Unknown keys are rejected. UE ids must run `1..=M` in file order.

use std::path::Path;

use rballoc::{Damping, Scenario64, SolverParams64, Ue, UtilityFunction};
use serde::Deserialize;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema: u32,
    bandwidth: f64,
    #[serde(default)]
    solver: Option<RawSolver>,
    #[serde(default)]
    ue: Vec<RawUe>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    delta: Option<f64>,
    max_iters: Option<i64>,
    w_init: Option<f64>,
    damping: Option<String>,
    l1: Option<f64>,
    l2: Option<f64>,
    l3: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUe {
    id: i64,
    utility: String,
    a: Option<f64>,
    b: Option<f64>,
    k: Option<f64>,
    r_max: Option<f64>,
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario64, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> Result<Scenario64, ScenarioError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    if raw.schema != SCHEMA_VERSION {
        return Err(invalid(
            "schema",
            format!("unsupported version {}, expected {SCHEMA_VERSION}", raw.schema),
        ));
    }
    let params = solver_params(raw.solver.unwrap_or_default())?;

    if raw.ue.is_empty() {
        return Err(invalid("ue", "at least one [[ue]] table is required"));
    }
    let mut ues = Vec::with_capacity(raw.ue.len());
    for (i, ue) in raw.ue.iter().enumerate() {
        let field = |name: &str| format!("ue[{}].{name}", i + 1);
        if ue.id != i as i64 + 1 {
            return Err(invalid(
                field("id"),
                format!("expected {} (ids run 1..=M in file order), got {}", i + 1, ue.id),
            ));
        }
        let require = |name: &str, v: Option<f64>| -> Result<f64, ScenarioError> {
            let v = v.ok_or_else(|| invalid(field(name), "missing"))?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(invalid(field(name), format!("must be > 0, got {v}")))
            }
        };
        let forbid = |name: &str, v: Option<f64>| match v {
            Some(_) => Err(invalid(field(name), format!("not a parameter of a {} utility", ue.utility))),
            None => Ok(()),
        };
        let utility = match ue.utility.as_str() {
            "sigmoidal" => {
                forbid("k", ue.k)?;
                forbid("r_max", ue.r_max)?;
                UtilityFunction::Sigmoidal {
                    a: require("a", ue.a)?,
                    b: require("b", ue.b)?,
                }
            }
            "logarithmic" => {
                forbid("a", ue.a)?;
                forbid("b", ue.b)?;
                UtilityFunction::Logarithmic {
                    k: require("k", ue.k)?,
                    r_max: require("r_max", ue.r_max)?,
                }
            }
            other => {
                return Err(invalid(
                    field("utility"),
                    format!("expected \"sigmoidal\" or \"logarithmic\", got {other:?}"),
                ))
            }
        };
        ues.push(Ue {
            id: ue.id as u32,
            utility,
        });
    }

    let m = ues.len();
    if !(raw.bandwidth.is_finite() && raw.bandwidth >= m as f64) {
        return Err(invalid(
            "bandwidth",
            format!("R = {} must be at least the UE count {m}", raw.bandwidth),
        ));
    }
    let scenario = Scenario64 {
        ues,
        bandwidth: raw.bandwidth,
        params,
    };
    scenario
        .validate()
        .map_err(|e| invalid("scenario", e.to_string()))?;
    Ok(scenario)
}

fn solver_params(raw: RawSolver) -> Result<SolverParams64, ScenarioError> {
    let defaults = SolverParams64::default();
    let positive = |name: &str, v: Option<f64>, default: f64| -> Result<f64, ScenarioError> {
        match v {
            None => Ok(default),
            Some(v) if v.is_finite() && v > 0.0 => Ok(v),
            Some(v) => Err(invalid(format!("solver.{name}"), format!("must be > 0, got {v}"))),
        }
    };
    let max_iters = match raw.max_iters {
        None => defaults.max_iters,
        Some(n) if n >= 1 => n as usize,
        Some(n) => return Err(invalid("solver.max_iters", format!("must be >= 1, got {n}"))),
    };
    let damping = match raw.damping.as_deref() {
        None | Some("harmonic") => {
            if raw.l1.is_some() || raw.l2.is_some() {
                return Err(invalid("solver.l1", "l1/l2 belong to exponential damping"));
            }
            let Damping::Harmonic { l3: default_l3 } = defaults.damping else {
                unreachable!("default damping is harmonic")
            };
            Damping::Harmonic {
                l3: positive("l3", raw.l3, default_l3)?,
            }
        }
        Some("exponential") => {
            if raw.l3.is_some() {
                return Err(invalid("solver.l3", "l3 belongs to harmonic damping"));
            }
            let l1 = raw.l1.ok_or_else(|| invalid("solver.l1", "missing"))?;
            let l2 = raw.l2.ok_or_else(|| invalid("solver.l2", "missing"))?;
            Damping::Exponential {
                l1: positive("l1", Some(l1), 0.0)?,
                l2: positive("l2", Some(l2), 0.0)?,
            }
        }
        Some(other) => {
            return Err(invalid(
                "solver.damping",
                format!("expected \"harmonic\" or \"exponential\", got {other:?}"),
            ))
        }
    };
    Ok(SolverParams64 {
        delta: positive("delta", raw.delta, defaults.delta)?,
        max_iters,
        damping,
        w_init: positive("w_init", raw.w_init, defaults.w_init)?,
    })
}
