//! Per-run assertion log, artifact writer and `report.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub measured: Json,
    /// `==`, `<=`, `>=`, `within`, `holds` or `measured` (informational only).
    pub relation: String,
    pub expected: Json,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub module: String,
    pub anchor: String,
    pub config: BTreeMap<String, String>,
    pub assertions: Vec<Assertion>,
    pub artifacts: Vec<String>,
    pub wall_clock_seconds: f64,
    /// Set when the run stopped on an error instead of finishing.
    pub error: Option<String>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

fn finite(x: f64) -> Json {
    serde_json::Number::from_f64(x).map(Json::Number).unwrap_or_else(|| Json::String(format!("{x}")))
}

/// Collects assertions and writes artifacts under one output directory.
#[derive(Debug)]
pub struct Session {
    out_dir: PathBuf,
    seed: u64,
    assertions: Vec<Assertion>,
    artifacts: Vec<String>,
}

impl Session {
    pub fn new(out_dir: impl Into<PathBuf>, seed: u64) -> Self {
        Self { out_dir: out_dir.into(), seed, assertions: Vec::new(), artifacts: Vec::new() }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn artifacts(&self) -> &[String] {
        &self.artifacts
    }

    fn push(&mut self, name: &str, measured: Json, relation: &str, expected: Json, tolerance: Option<f64>, passed: bool) -> bool {
        self.assertions.push(Assertion { name: name.into(), measured, relation: relation.into(), expected, tolerance, passed });
        passed
    }

    /// `|measured − expected| <= tolerance`.
    pub fn close(&mut self, name: &str, measured: f64, expected: f64, tolerance: f64) -> bool {
        let ok = (measured - expected).abs() <= tolerance;
        self.push(name, finite(measured), "within", finite(expected), Some(tolerance), ok)
    }

    /// `|measured − expected| <= rel · |expected|`.
    pub fn close_rel(&mut self, name: &str, measured: f64, expected: f64, rel: f64) -> bool {
        let ok = (measured - expected).abs() <= rel * expected.abs();
        self.push(name, finite(measured), "within_rel", finite(expected), Some(rel), ok)
    }

    pub fn at_most(&mut self, name: &str, measured: f64, bound: f64) -> bool {
        self.push(name, finite(measured), "<=", finite(bound), None, measured <= bound)
    }

    pub fn at_least(&mut self, name: &str, measured: f64, bound: f64) -> bool {
        self.push(name, finite(measured), ">=", finite(bound), None, measured >= bound)
    }

    /// Exact equality of rendered values (exact scalars, counts, flags).
    pub fn equal(&mut self, name: &str, measured: impl ToString, expected: impl ToString) -> bool {
        let (m, e) = (measured.to_string(), expected.to_string());
        let ok = m == e;
        self.push(name, Json::String(m), "==", Json::String(e), None, ok)
    }

    pub fn holds(&mut self, name: &str, ok: bool, detail: impl ToString) -> bool {
        self.push(name, Json::String(detail.to_string()), "holds", Json::Bool(true), None, ok)
    }

    /// Recorded for inspection; never fails the run.
    pub fn measured(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Json::Null);
        self.push(name, v, "measured", Json::Null, None, true);
    }

    /// Writes `contents` to `rel` under the output directory and lists it.
    pub fn artifact(&mut self, rel: &str, contents: &str) -> Result<()> {
        let path = self.out_dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::Io { path: parent.into(), source: e })?;
        }
        fs::write(&path, contents).map_err(|e| Error::Io { path: path.clone(), source: e })?;
        self.artifacts.push(rel.to_string());
        Ok(())
    }

    pub fn json_artifact(&mut self, rel: &str, value: &impl Serialize) -> Result<()> {
        let text = serde_json::to_string_pretty(value)?;
        self.artifact(rel, &(text + "\n"))
    }

    pub(crate) fn into_parts(self) -> (Vec<Assertion>, Vec<String>) {
        (self.assertions, self.artifacts)
    }
}

pub fn write_report(dir: &Path, report: &ExperimentReport) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.into(), source: e })?;
    let path = dir.join("report.json");
    let text = serde_json::to_string_pretty(report)? + "\n";
    fs::write(&path, text).map_err(|e| Error::Io { path: path.clone(), source: e })?;
    Ok(path)
}

pub fn read_report(path: &Path) -> Result<ExperimentReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.into(), source: e })?;
    Ok(serde_json::from_str(&text)?)
}
