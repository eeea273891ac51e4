//! JSON scenario configs.
//!
//! ```json
//! {
//!   "scenario": "refinance_game",
//!   "params": { "interest_pct": 100, "n_borrowers": 1000 },
//!   "seed": 7,
//!   "output_dir": "out",
//!   "formats": ["csv", "json", "svg"],
//!   "network": "three_banks.txt"
//! }
//! ```
//!
//! Only `scenario` is required. `params` defaults per scenario schema,
//! `seed` to 0, `output_dir` to `out`, `formats` to CSV and JSON. `network`
//! names an ownership network file for the scenarios that use one.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde_json::{Map, Value};

use crate::registry::{self, Bound, Kind, ParamSpec, ScenarioSpec};
use crate::report::Format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Bool(bool),
}

impl ParamValue {
    pub fn to_json(self) -> Value {
        match self {
            ParamValue::Number(v) => {
                if v.fract() == 0.0 && v.abs() < 9.0e15 {
                    Value::from(v as i64)
                } else {
                    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
                }
            }
            ParamValue::Bool(v) => Value::Bool(v),
        }
    }
}

/// Validated parameters with defaults filled in.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params(BTreeMap<String, ParamValue>);

impl Params {
    pub fn get(&self, name: &str) -> Option<ParamValue> {
        self.0.get(name).copied()
    }

    pub fn set(&mut self, name: &str, value: ParamValue) {
        self.0.insert(name.to_string(), value);
    }

    /// # Panics
    /// If `name` is not a number parameter of the scenario.
    pub fn num(&self, name: &str) -> f64 {
        match self.0.get(name) {
            Some(ParamValue::Number(v)) => *v,
            other => panic!("number parameter '{name}' missing: {other:?}"),
        }
    }

    /// # Panics
    /// If `name` is not a count parameter of the scenario.
    pub fn count(&self, name: &str) -> u64 {
        self.num(name) as u64
    }

    /// # Panics
    /// If `name` is not a flag parameter of the scenario.
    pub fn flag(&self, name: &str) -> bool {
        match self.0.get(name) {
            Some(ParamValue::Bool(v)) => *v,
            other => panic!("flag parameter '{name}' missing: {other:?}"),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamValue)> {
        self.0.iter()
    }

    pub fn to_json(&self) -> BTreeMap<String, Value> {
        self.0.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: &'static ScenarioSpec,
    pub params: Params,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    pub network: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Syntax(String),
    NotAnObject,
    UnknownField { field: String },
    MissingScenario,
    UnknownScenario { name: String, suggestion: Option<&'static str> },
    UnknownParam { name: String, suggestion: Option<&'static str> },
    MissingParam { name: &'static str },
    WrongType { field: String, expected: &'static str },
    OutOfRange { name: &'static str, value: f64, bound: String },
    UnknownFormat { name: String },
    Inconsistent(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Syntax(m) => write!(f, "malformed JSON: {m}"),
            Violation::NotAnObject => write!(f, "config must be a JSON object"),
            Violation::UnknownField { field } => write!(f, "unknown field '{field}'"),
            Violation::MissingScenario => write!(f, "missing field 'scenario'"),
            Violation::UnknownScenario { name, suggestion } => {
                write!(f, "unknown scenario '{name}'")?;
                match suggestion {
                    Some(s) => write!(f, "; did you mean '{s}'?"),
                    None => write!(f, "; run list-scenarios to see them all"),
                }
            }
            Violation::UnknownParam { name, suggestion } => {
                write!(f, "unknown parameter '{name}'")?;
                if let Some(s) = suggestion {
                    write!(f, "; did you mean '{s}'?")?;
                }
                Ok(())
            }
            Violation::MissingParam { name } => write!(f, "missing required parameter '{name}'"),
            Violation::WrongType { field, expected } => write!(f, "'{field}' must be {expected}"),
            Violation::OutOfRange { name, value, bound } => {
                write!(f, "parameter '{name}' = {value} out of range: must be {bound}")
            }
            Violation::UnknownFormat { name } => {
                write!(f, "unknown format '{name}'; expected csv, json or svg")
            }
            Violation::Inconsistent(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config:")?;
        for v in &self.violations {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

const FIELDS: [&str; 6] = ["scenario", "params", "seed", "output_dir", "formats", "network"];

/// Closest candidate by edit similarity, if any is reasonably close.
pub fn nearest<'a>(name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .into_iter()
        .map(|c| (strsim::jaro_winkler(name, c), c))
        .filter(|(score, _)| *score >= 0.7)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, c)| c)
}

pub fn parse_config(text: &[u8]) -> Result<ScenarioConfig, ConfigError> {
    let fail = |v| ConfigError { violations: vec![v] };
    let value: Value =
        serde_json::from_slice(text).map_err(|e| fail(Violation::Syntax(e.to_string())))?;
    let Value::Object(obj) = value else {
        return Err(fail(Violation::NotAnObject));
    };

    let mut violations = Vec::new();
    for key in obj.keys().filter(|k| !FIELDS.contains(&k.as_str())) {
        violations.push(Violation::UnknownField { field: key.clone() });
    }

    let scenario = match obj.get("scenario") {
        None => {
            violations.push(Violation::MissingScenario);
            None
        }
        Some(Value::String(name)) => match registry::lookup(name) {
            Some(spec) => Some(spec),
            None => {
                violations.push(Violation::UnknownScenario {
                    name: name.clone(),
                    suggestion: nearest(name, registry::SCENARIOS.iter().map(|s| s.name)),
                });
                None
            }
        },
        Some(_) => {
            violations.push(Violation::WrongType {
                field: "scenario".into(),
                expected: "a string",
            });
            None
        }
    };

    let seed = match obj.get("seed") {
        None => 0,
        Some(v) => v.as_u64().unwrap_or_else(|| {
            violations.push(Violation::WrongType {
                field: "seed".into(),
                expected: "a non-negative integer",
            });
            0
        }),
    };

    let output_dir = match obj.get("output_dir") {
        None => PathBuf::from("out"),
        Some(Value::String(s)) => PathBuf::from(s),
        Some(_) => {
            violations.push(Violation::WrongType {
                field: "output_dir".into(),
                expected: "a string",
            });
            PathBuf::from("out")
        }
    };

    let network = match obj.get("network") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => {
            violations.push(Violation::WrongType {
                field: "network".into(),
                expected: "a file path string",
            });
            None
        }
    };

    let formats = match obj.get("formats") {
        None => vec![Format::Csv, Format::Json],
        Some(v) => parse_formats(v, &mut violations),
    };

    let empty = Map::new();
    let raw_params = match obj.get("params") {
        None => &empty,
        Some(Value::Object(m)) => m,
        Some(_) => {
            violations.push(Violation::WrongType {
                field: "params".into(),
                expected: "an object",
            });
            &empty
        }
    };
    let params = scenario.map(|spec| check_params(spec, raw_params, &mut violations));
    if let (Some(spec), Some(_)) = (scenario, &network) {
        if !spec.uses_network {
            violations.push(Violation::Inconsistent(format!(
                "scenario '{}' does not read a network",
                spec.name
            )));
        }
    }

    if !violations.is_empty() {
        return Err(ConfigError { violations });
    }
    Ok(ScenarioConfig {
        scenario: scenario.expect("no violations"),
        params: params.expect("no violations"),
        seed,
        output_dir,
        formats,
        network,
    })
}

fn parse_formats(value: &Value, violations: &mut Vec<Violation>) -> Vec<Format> {
    let Value::Array(items) = value else {
        violations.push(Violation::WrongType {
            field: "formats".into(),
            expected: "an array of strings",
        });
        return Vec::new();
    };
    let mut formats = Vec::new();
    for item in items {
        match item.as_str().map(|s| (s, Format::parse(s))) {
            Some((_, Some(f))) => {
                if !formats.contains(&f) {
                    formats.push(f);
                }
            }
            Some((s, None)) => violations.push(Violation::UnknownFormat { name: s.into() }),
            None => violations.push(Violation::WrongType {
                field: "formats".into(),
                expected: "an array of strings",
            }),
        }
    }
    formats.sort();
    formats
}

/// Parses a comma-separated format list such as `csv,svg`.
pub fn parse_format_list(list: &str) -> Result<Vec<Format>, ConfigError> {
    let mut violations = Vec::new();
    let mut formats = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        match Format::parse(part) {
            Some(f) if !formats.contains(&f) => formats.push(f),
            Some(_) => {}
            None => violations.push(Violation::UnknownFormat {
                name: part.trim().into(),
            }),
        }
    }
    if violations.is_empty() {
        formats.sort();
        Ok(formats)
    } else {
        Err(ConfigError { violations })
    }
}

fn check_params(
    spec: &'static ScenarioSpec,
    raw: &Map<String, Value>,
    violations: &mut Vec<Violation>,
) -> Params {
    let mut params = Params::default();
    for key in raw.keys() {
        if spec.param(key).is_none() {
            violations.push(Violation::UnknownParam {
                name: key.clone(),
                suggestion: nearest(key, spec.params.iter().map(|p| p.name)),
            });
        }
    }
    for p in spec.params {
        let value = match raw.get(p.name) {
            Some(v) => match check_value(p, v) {
                Ok(v) => v,
                Err(violation) => {
                    violations.push(violation);
                    continue;
                }
            },
            None => match p.default {
                Some(v) => v,
                None => {
                    violations.push(Violation::MissingParam { name: p.name });
                    continue;
                }
            },
        };
        params.set(p.name, value);
    }
    if violations.is_empty() {
        for message in (spec.cross_check)(&params) {
            violations.push(Violation::Inconsistent(message));
        }
    }
    params
}

fn check_value(p: &ParamSpec, v: &Value) -> Result<ParamValue, Violation> {
    let wrong = |expected| Violation::WrongType {
        field: format!("params.{}", p.name),
        expected,
    };
    match p.kind {
        Kind::Flag => v.as_bool().map(ParamValue::Bool).ok_or(wrong("true or false")),
        Kind::Number | Kind::Count => {
            let x = v.as_f64().ok_or(wrong("a number"))?;
            if p.kind == Kind::Count && (x.fract() != 0.0 || x < 0.0) {
                return Err(wrong("a non-negative integer"));
            }
            let below = match p.min {
                Bound::Open => false,
                Bound::Inclusive(m) => x < m,
                Bound::Exclusive(m) => x <= m,
            };
            let above = match p.max {
                Bound::Open => false,
                Bound::Inclusive(m) => x > m,
                Bound::Exclusive(m) => x >= m,
            };
            if below || above {
                return Err(Violation::OutOfRange {
                    name: p.name,
                    value: x,
                    bound: p.range_text(),
                });
            }
            Ok(ParamValue::Number(x))
        }
    }
}
