//! TOML scenario files: parsing, dispatch to the analysis modules,
//! embedded assertions and atomic artifact output.

mod analyses;
mod goldens;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

pub use analyses::{
    Analysis, DynamicsSpec, FrontierSpec, GovernanceSpec, HopfSpec, MarketSpec, PdmpSpec, StackSpec, StochasticSpec,
    VotingSpec,
};
pub use goldens::{golden, goldens, Golden};

/// The only scenario schema this build reads.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format_version: u32,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    /// Artifact directory, relative to the working directory.
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub analysis: Analysis,
    #[serde(default, rename = "check")]
    pub checks: Vec<Check>,
}

/// An embedded assertion on one report value: either `value` (with
/// optional absolute `tolerance`) or a `min`/`max` range.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub key: String,
    #[serde(default)]
    pub value: Option<toml::Value>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if s.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "format_version {} is not supported (expected {FORMAT_VERSION})",
                s.format_version
            )));
        }
        for c in &s.checks {
            if c.value.is_none() && c.min.is_none() && c.max.is_none() {
                return Err(Error::Parse(format!("check on {:?} needs value, min or max", c.key)));
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(v) => write!(f, "{v}"),
        }
    }
}

impl Value {
    fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Num(v) => Some(v),
            Value::Int(v) => Some(v as f64),
            _ => None,
        }
    }
}

/// Flat, ordered key–value results plus artifact files.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub summary: String,
    pub values: Vec<(String, Value)>,
    pub files: Vec<(String, Vec<u8>)>,
}

impl Report {
    pub fn num(&mut self, key: impl Into<String>, v: f64) {
        self.values.push((key.into(), Value::Num(v)));
    }

    pub fn int(&mut self, key: impl Into<String>, v: i64) {
        self.values.push((key.into(), Value::Int(v)));
    }

    pub fn flag(&mut self, key: impl Into<String>, v: bool) {
        self.values.push((key.into(), Value::Bool(v)));
    }

    pub fn text(&mut self, key: impl Into<String>, v: impl Into<String>) {
        self.values.push((key.into(), Value::Text(v.into())));
    }

    pub fn file(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.values {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub key: String,
    pub passed: bool,
    pub detail: String,
}

fn evaluate(check: &Check, report: &Report) -> CheckResult {
    let fail = |detail: String| CheckResult { key: check.key.clone(), passed: false, detail };
    let Some(actual) = report.get(&check.key) else {
        return fail("no such key in the report".into());
    };
    if let Some(expected) = &check.value {
        let ok = match (expected, actual) {
            (toml::Value::Boolean(e), Value::Bool(a)) => e == a,
            (toml::Value::String(e), Value::Text(a)) => e == a,
            (toml::Value::Integer(e), Value::Int(a)) => e == a,
            (toml::Value::Integer(_) | toml::Value::Float(_), a) if a.as_f64().is_some() => {
                let e = expected.as_float().or(expected.as_integer().map(|i| i as f64)).unwrap();
                (a.as_f64().unwrap() - e).abs() <= check.tolerance.unwrap_or(0.0)
            }
            _ => false,
        };
        if !ok {
            return fail(format!("expected {expected} (tol {:?}), got {actual}", check.tolerance));
        }
    }
    if check.min.is_some() || check.max.is_some() {
        let Some(a) = actual.as_f64() else {
            return fail(format!("range check on non-numeric value {actual}"));
        };
        if check.min.is_some_and(|m| a < m) || check.max.is_some_and(|m| a > m) {
            return fail(format!("{a} outside [{:?}, {:?}]", check.min, check.max));
        }
    }
    CheckResult { key: check.key.clone(), passed: true, detail: format!("{actual}") }
}

pub fn run_checks(scenario: &Scenario, report: &Report) -> Vec<CheckResult> {
    scenario.checks.iter().map(|c| evaluate(c, report)).collect()
}

/// Runs the analysis with the scenario's seed (or `seed_override`).
pub fn run_scenario(scenario: &Scenario, seed_override: Option<u64>) -> Result<Report> {
    analyses::run(&scenario.analysis, seed_override.unwrap_or(scenario.seed))
}

/// Writes `report.txt` and every artifact into `dir` via temp file + rename.
pub fn write_artifacts(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let kv = report.to_kv().into_bytes();
    for (name, bytes) in std::iter::once(("report.txt", &kv)).chain(report.files.iter().map(|(n, b)| (n.as_str(), b))) {
        let path = dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        written.push(path);
    }
    Ok(written)
}
