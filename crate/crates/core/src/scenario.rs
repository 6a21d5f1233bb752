//! JSON scenario files.
//!
//! ```json
//! {
//!   "base": "P2",
//!   "lines": ["L"],
//!   "blowups": [
//!     {"point": "general", "name": "E0"},
//!     {"point": {"on": "E0"}, "name": "E1"},
//!     {"point": {"at": ["E0", "E1"]}, "name": "E2"}
//!   ],
//!   "contract": [["E0", "E1"]],
//!   "boundary": {"E2": "1/2"},
//!   "epsilon": "0",
//!   "strategy": "most-negative-first"
//! }
//! ```
//!
//! Rationals are strings `p/q` or `p`. Only `base` is mandatory.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::lattice::{PointSpec, SurfaceModel};
use crate::mmp::{MmpState, Strategy};
use crate::singularities::{check_boundary, QDivisor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("base `{0}` is not supported (only \"P2\")")]
    BaseUnsupported(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ScenarioError {
    fn at(path: impl Into<String>, message: impl ToString) -> Self {
        ScenarioError::Invalid { path: path.into(), message: message.to_string() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    base: String,
    #[serde(default)]
    lines: Vec<String>,
    #[serde(default)]
    blowups: Vec<RawBlowup>,
    #[serde(default)]
    contract: Vec<Vec<String>>,
    #[serde(default)]
    boundary: BTreeMap<String, String>,
    #[serde(default)]
    epsilon: Option<String>,
    #[serde(default)]
    strategy: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlowup {
    point: RawPoint,
    name: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPoint {
    Word(String),
    On { on: String },
    At { at: (String, String) },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blowup {
    pub point: PointSpec,
    pub name: String,
}

/// A validated scenario. Building it cannot fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub lines: Vec<String>,
    pub blowups: Vec<Blowup>,
    pub contract: Vec<Vec<String>>,
    pub boundary: QDivisor,
    pub epsilon: BigRational,
    pub strategy: Strategy,
}

/// Parses `p/q` or `p` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn rational_field(path: &str, s: &str) -> Result<BigRational, ScenarioError> {
    parse_rational(s).ok_or_else(|| ScenarioError::at(path, format!("malformed rational `{s}`")))
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.base != "P2" {
        return Err(ScenarioError::BaseUnsupported(raw.base));
    }

    let mut names = BTreeSet::new();
    for (i, l) in raw.lines.iter().enumerate() {
        if !names.insert(l.clone()) {
            return Err(ScenarioError::at(format!("lines[{i}]"), format!("duplicate name `{l}`")));
        }
    }
    let mut blowups = Vec::with_capacity(raw.blowups.len());
    for (i, b) in raw.blowups.into_iter().enumerate() {
        let known = |n: &str, field: &str| {
            if names.contains(n) {
                Ok(n.to_string())
            } else {
                Err(ScenarioError::at(format!("blowups[{i}].point.{field}"), format!("unknown curve `{n}`")))
            }
        };
        let point = match &b.point {
            RawPoint::Word(w) if w == "general" => PointSpec::General,
            RawPoint::Word(w) => {
                return Err(ScenarioError::at(
                    format!("blowups[{i}].point"),
                    format!("expected \"general\", {{\"on\": name}} or {{\"at\": [a, b]}}, got \"{w}\""),
                ))
            }
            RawPoint::On { on } => PointSpec::OnCurve(known(on, "on")?),
            RawPoint::At { at: (a, c) } => PointSpec::AtIntersection(known(a, "at")?, known(c, "at")?),
        };
        if !names.insert(b.name.clone()) {
            return Err(ScenarioError::at(format!("blowups[{i}].name"), format!("duplicate name `{}`", b.name)));
        }
        blowups.push(Blowup { point, name: b.name });
    }
    for (i, batch) in raw.contract.iter().enumerate() {
        if batch.is_empty() {
            return Err(ScenarioError::at(format!("contract[{i}]"), "empty contraction batch"));
        }
        for (j, n) in batch.iter().enumerate() {
            if !names.contains(n) {
                return Err(ScenarioError::at(format!("contract[{i}][{j}]"), format!("unknown curve `{n}`")));
            }
        }
    }
    let mut boundary = QDivisor::new();
    for (n, q) in &raw.boundary {
        let path = format!("boundary.{n}");
        if !names.contains(n) {
            return Err(ScenarioError::at(path, format!("unknown curve `{n}`")));
        }
        boundary.set(n, rational_field(&path, q)?);
    }
    let epsilon = match &raw.epsilon {
        Some(s) => rational_field("epsilon", s)?,
        None => BigRational::zero(),
    };
    if epsilon < BigRational::zero() || epsilon > BigRational::one() {
        return Err(ScenarioError::at("epsilon", format!("{epsilon} is outside [0, 1]")));
    }
    let strategy = match &raw.strategy {
        Some(s) => s.parse().map_err(|e| ScenarioError::at("strategy", e))?,
        None => Strategy::MostNegativeFirst,
    };

    let scenario = Scenario { lines: raw.lines, blowups, contract: raw.contract, boundary, epsilon, strategy };
    scenario.try_build()?;
    Ok(scenario)
}

impl Scenario {
    fn try_build(&self) -> Result<MmpState, ScenarioError> {
        let mut model = SurfaceModel::projective_plane();
        for (i, l) in self.lines.iter().enumerate() {
            model = model.add_line(l).map_err(|e| ScenarioError::at(format!("lines[{i}]"), e))?;
        }
        for (i, b) in self.blowups.iter().enumerate() {
            model = model
                .blow_up(b.point.clone(), &b.name)
                .map_err(|e| ScenarioError::at(format!("blowups[{i}]"), e))?;
        }
        for (i, batch) in self.contract.iter().enumerate() {
            let path = format!("contract[{i}]");
            let castelnuovo = batch.len() == 1 && {
                let c = &batch[0];
                model.self_intersection(c).map(|s| s == -BigInt::one()).unwrap_or(false)
                    && !model.is_contracted(c)
                    && model.contracted().iter().all(|e| model.intersection(c, e).map(|m| m.is_zero()).unwrap_or(false))
            };
            model = if castelnuovo { model.blow_down(&batch[0]) } else { model.contract(batch) }
                .map_err(|e| ScenarioError::at(path, e))?;
        }
        for n in self.boundary.support() {
            if !model.contains(n) {
                return Err(ScenarioError::at(format!("boundary.{n}"), format!("`{n}` was blown down")));
            }
        }
        check_boundary(&model, &self.boundary).map_err(|e| ScenarioError::at("boundary", e))?;
        MmpState::new(model, self.boundary.clone()).map_err(|e| ScenarioError::at("boundary", e))
    }

    /// The log surface `(X, Δ)` the scenario describes.
    pub fn build(&self) -> MmpState {
        self.try_build().expect("validated scenario")
    }

    /// Normalized JSON: rationals in lowest terms, defaults written out,
    /// empty optional sections dropped.
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("base".into(), json!("P2"));
        if !self.lines.is_empty() {
            obj.insert("lines".into(), json!(self.lines));
        }
        let blowups: Vec<Value> = self
            .blowups
            .iter()
            .map(|b| {
                let point = match &b.point {
                    PointSpec::General => json!("general"),
                    PointSpec::OnCurve(c) => json!({ "on": c }),
                    PointSpec::AtIntersection(a, c) => json!({ "at": [a, c] }),
                };
                json!({ "point": point, "name": b.name })
            })
            .collect();
        obj.insert("blowups".into(), Value::Array(blowups));
        if !self.contract.is_empty() {
            obj.insert("contract".into(), json!(self.contract));
        }
        if !self.boundary.is_zero() {
            let b: serde_json::Map<String, Value> =
                self.boundary.iter().map(|(n, q)| (n.to_string(), json!(q.to_string()))).collect();
            obj.insert("boundary".into(), Value::Object(b));
        }
        obj.insert("epsilon".into(), json!(self.epsilon.to_string()));
        obj.insert("strategy".into(), json!(self.strategy.to_string()));
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }
}
