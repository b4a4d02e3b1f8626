//! Problem-spec JSON schema and loading.
//!
//! ```json
//! {
//!   "problem": "p2",
//!   "ramp": {"kind": "power", "coeff": 1.0, "exp": 0.5},
//!   "e0": 1.0,
//!   "x_star": 2.0,
//!   "p_bar": 0.5,
//!   "x_max": 10.0,
//!   "tol": 1e-10
//! }
//! ```
//!
//! Tabulated ramps accept either inline arrays or `{"kind": "tabulated",
//! "path": "wall.csv"}` with a `x,b` header. Precedence for numeric knobs is
//! CLI flag > spec file > default.

use rampflow::geometry::{ProfileKind, RampProfile};
use rampflow::problem2::DeadGasSpec;
use rampflow::problem3::JetSpec;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    P1,
    P2,
    P3,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RampSpec {
    Wedge { slope: f64 },
    Power { coeff: f64, exp: f64 },
    Polynomial { coeffs: Vec<f64> },
    Tabulated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StaticGasSpec {
    pub rho: f64,
    pub e: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn default_gamma() -> f64 {
    1.4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JetSpecJson {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub e: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub problem: ProblemKind,
    pub ramp: RampSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_end: Option<f64>,
    #[serde(default = "default_e0")]
    pub e0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub static_gas: Option<StaticGasSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jet: Option<JetSpecJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

fn default_e0() -> f64 {
    1.0
}

/// A loaded, cross-validated problem ready to hand to the solvers.
#[derive(Debug, Clone)]
pub struct Problem {
    pub kind: ProblemKind,
    pub profile: RampProfile,
    pub e0: f64,
    pub dead_gas: Option<DeadGasSpec>,
    pub jet: Option<JetSpec>,
    pub x_max: f64,
    pub tol: f64,
}

#[derive(Debug)]
pub struct SpecError(pub String);

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SpecError {}

pub fn load_spec(path: &Path) -> Result<ProblemSpec, SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        SpecError(format!(
            "invalid spec {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn load_tabulated_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>), SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError(format!("cannot read {}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut bs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if i == 0 {
            if line.replace(' ', "") != "x,b" {
                return Err(SpecError(format!(
                    "{}: expected header 'x,b', found '{line}'",
                    path.display()
                )));
            }
            continue;
        }
        let mut it = line.split(',');
        let (Some(a), Some(b)) = (it.next(), it.next()) else {
            return Err(SpecError(format!("{}: bad row {i}: '{line}'", path.display())));
        };
        xs.push(a.trim().parse::<f64>().map_err(|e| {
            SpecError(format!("{} row {i}: bad x: {e}", path.display()))
        })?);
        bs.push(b.trim().parse::<f64>().map_err(|e| {
            SpecError(format!("{} row {i}: bad b: {e}", path.display()))
        })?);
    }
    Ok((xs, bs))
}

/// Build the validated problem; `base_dir` resolves relative CSV paths and
/// the overrides implement flag > file > default precedence.
pub fn build_problem(
    spec: &ProblemSpec,
    base_dir: &Path,
    x_max_override: Option<f64>,
    tol_override: Option<f64>,
) -> Result<Problem, SpecError> {
    let kind = match &spec.ramp {
        RampSpec::Wedge { slope } => ProfileKind::Wedge { slope: *slope },
        RampSpec::Power { coeff, exp } => ProfileKind::Power { coeff: *coeff, exponent: *exp },
        RampSpec::Polynomial { coeffs } => ProfileKind::Polynomial { coeffs: coeffs.clone() },
        RampSpec::Tabulated { path, x, b } => match (path, x, b) {
            (Some(p), None, None) => {
                let (x, b) = load_tabulated_csv(&base_dir.join(p))?;
                ProfileKind::Tabulated { x, b }
            }
            (None, Some(x), Some(b)) => ProfileKind::Tabulated { x: x.clone(), b: b.clone() },
            _ => {
                return Err(SpecError(
                    "tabulated ramp needs either 'path' or both 'x' and 'b'".into(),
                ))
            }
        },
    };
    let profile = RampProfile::new(kind, spec.x_end).map_err(|e| SpecError(e.to_string()))?;
    if spec.e0 <= 0.5 {
        return Err(SpecError(format!("e0 must exceed 1/2, got {}", spec.e0)));
    }
    let tol = tol_override.or(spec.tol).unwrap_or(1e-10);
    if tol <= 0.0 {
        return Err(SpecError("tol must be positive".into()));
    }

    let need_x_star = || {
        spec.x_star
            .ok_or_else(|| SpecError("x_star is required for p2/p3".into()))
            .and_then(|v| {
                if v <= 0.0 {
                    Err(SpecError("x_star must be positive".into()))
                } else if v > profile.x_end() {
                    Err(SpecError(format!(
                        "x_star = {v} exceeds the ramp end {}",
                        profile.x_end()
                    )))
                } else {
                    Ok(v)
                }
            })
    };

    let (dead_gas, jet, default_x_max) = match spec.problem {
        ProblemKind::P1 => {
            if spec.p_bar.is_some() || spec.static_gas.is_some() || spec.jet.is_some() {
                return Err(SpecError("p1 takes no dead-gas or jet data".into()));
            }
            (None, None, profile.x_end().min(10.0))
        }
        ProblemKind::P2 => {
            let x_star = need_x_star()?;
            let dg = match (&spec.p_bar, &spec.static_gas) {
                (Some(p), None) => DeadGasSpec::with_pressure(x_star, *p),
                (None, Some(s)) => DeadGasSpec::from_static_state(x_star, s.rho, s.e, s.gamma),
                (Some(_), Some(_)) => {
                    return Err(SpecError("give either p_bar or static_gas, not both".into()))
                }
                (None, None) => {
                    return Err(SpecError("p2 needs p_bar or static_gas".into()))
                }
            }
            .map_err(|e| SpecError(e.to_string()))?;
            if spec.jet.is_some() {
                return Err(SpecError("p2 takes no jet data".into()));
            }
            (Some(dg), None, 5.0 * x_star)
        }
        ProblemKind::P3 => {
            let x_star = need_x_star()?;
            let j = spec
                .jet
                .as_ref()
                .ok_or_else(|| SpecError("p3 needs a jet block".into()))?;
            let jet = JetSpec { x_star, rho: j.rho, u: j.u, v: j.v, e: j.e };
            jet.validate().map_err(|e| SpecError(e.to_string()))?;
            if spec.p_bar.is_some() || spec.static_gas.is_some() {
                return Err(SpecError("p3 takes no dead-gas data".into()));
            }
            (None, Some(jet), 5.0 * x_star)
        }
    };
    let x_max = x_max_override.or(spec.x_max).unwrap_or(default_x_max);
    if !(x_max > 0.0) {
        return Err(SpecError("x_max must be positive".into()));
    }
    Ok(Problem { kind: spec.problem, profile, e0: spec.e0, dead_gas, jet, x_max, tol })
}
