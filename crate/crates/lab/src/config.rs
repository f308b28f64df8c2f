//! Flat `key = value` experiment configuration with a typed schema per experiment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Int,
    Float,
    Bool,
    Text,
    IntList,
    FloatList,
}

impl ParamKind {
    fn name(self) -> &'static str {
        match self {
            ParamKind::Int => "integer",
            ParamKind::Float => "float",
            ParamKind::Bool => "bool",
            ParamKind::Text => "text",
            ParamKind::IntList => "comma-separated integers",
            ParamKind::FloatList => "comma-separated floats",
        }
    }
}

/// One schema entry; `default` is parsed with the same rules as config text.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: ParamKind,
    pub default: &'static str,
    pub help: &'static str,
}

impl ParamSpec {
    pub const fn new(key: &'static str, kind: ParamKind, default: &'static str, help: &'static str) -> Self {
        Self { key, kind, default, help }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    IntList(Vec<i64>),
    FloatList(Vec<f64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
        }
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v:?}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
            Value::IntList(v) => f.write_str(&join(v)),
            Value::FloatList(v) => f.write_str(&v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")),
        }
    }
}

fn parse_value(kind: ParamKind, raw: &str) -> Option<Value> {
    let raw = raw.trim();
    let list = || raw.split(',').map(str::trim).filter(|s| !s.is_empty());
    Some(match kind {
        ParamKind::Int => Value::Int(raw.parse().ok()?),
        ParamKind::Float => Value::Float(raw.parse().ok().filter(|x: &f64| x.is_finite())?),
        ParamKind::Bool => Value::Bool(match raw {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            _ => return None,
        }),
        ParamKind::Text => Value::Text(raw.to_string()),
        ParamKind::IntList => Value::IntList(list().map(str::parse).collect::<std::result::Result<_, _>>().ok()?),
        ParamKind::FloatList => Value::FloatList(list().map(str::parse).collect::<std::result::Result<_, _>>().ok()?),
    })
}

/// Keys every experiment accepts besides its own schema.
pub const SEED_KEY: &str = "seed";
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Validated parameter values, defaults filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    values: BTreeMap<String, Value>,
}

impl Params {
    /// Defaults overridden by `assignments`, in order; unknown keys and
    /// ill-typed values are rejected before anything runs.
    pub fn resolve(schema: &[ParamSpec], assignments: &[(String, String)]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for spec in schema {
            let v = parse_value(spec.kind, spec.default)
                .unwrap_or_else(|| panic!("default for `{}` does not parse as {}", spec.key, spec.kind.name()));
            values.insert(spec.key.to_string(), v);
        }
        values.insert(SEED_KEY.into(), Value::Int(DEFAULT_SEED as i64));
        for (key, raw) in assignments {
            let kind = if key == SEED_KEY {
                ParamKind::Int
            } else {
                let spec = schema.iter().find(|s| s.key == key).ok_or_else(|| {
                    let known: Vec<&str> = schema.iter().map(|s| s.key).collect();
                    Error::Config(format!("unknown key `{key}` (known: seed, {})", known.join(", ")))
                })?;
                spec.kind
            };
            let v = parse_value(kind, raw).ok_or_else(|| Error::Config(format!("`{key}` expects {}, got `{raw}`", kind.name())))?;
            if key == SEED_KEY && matches!(v, Value::Int(s) if s < 0) {
                return Err(Error::Config("seed must be nonnegative".into()));
            }
            values.insert(key.clone(), v);
        }
        Ok(Self { values })
    }

    fn get(&self, key: &str) -> &Value {
        self.values.get(key).unwrap_or_else(|| panic!("parameter `{key}` is not in the schema"))
    }

    pub fn int(&self, key: &str) -> i64 {
        match self.get(key) {
            Value::Int(v) => *v,
            v => panic!("`{key}` is {v:?}, not an integer"),
        }
    }

    pub fn uint(&self, key: &str) -> Result<u64> {
        u64::try_from(self.int(key)).map_err(|_| Error::Config(format!("`{key}` must be nonnegative")))
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Float(v) => *v,
            Value::Int(v) => *v as f64,
            v => panic!("`{key}` is {v:?}, not a float"),
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        match self.get(key) {
            Value::Bool(v) => *v,
            v => panic!("`{key}` is {v:?}, not a bool"),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Text(v) => v,
            v => panic!("`{key}` is {v:?}, not text"),
        }
    }

    pub fn ints(&self, key: &str) -> &[i64] {
        match self.get(key) {
            Value::IntList(v) => v,
            v => panic!("`{key}` is {v:?}, not an integer list"),
        }
    }

    pub fn floats(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::FloatList(v) => v,
            v => panic!("`{key}` is {v:?}, not a float list"),
        }
    }

    pub fn seed(&self) -> u64 {
        self.int(SEED_KEY) as u64
    }

    /// `key -> value` text, as echoed in reports.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
    }
}

/// Parses config text into ordered assignments. Blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", i + 1)));
        }
        if out.iter().any(|(seen, _)| seen == k) {
            return Err(Error::Config(format!("line {}: duplicate key `{k}`", i + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// `key=value` from the command line.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(Error::Config(format!("override `{s}` is not `key=value`"))),
    }
}

/// A validated request to run one experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub params: Params,
    pub out_dir: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: &[ParamSpec] = &[
        ParamSpec::new("m_hi", ParamKind::Int, "20", ""),
        ParamSpec::new("tol", ParamKind::Float, "0.02", ""),
        ParamSpec::new("js", ParamKind::FloatList, "2,4,8", ""),
        ParamSpec::new("fast", ParamKind::Bool, "true", ""),
    ];

    fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn defaults_and_overrides() {
        let p = Params::resolve(SCHEMA, &pairs(&[("m_hi", "14"), ("js", "2, 16"), ("seed", "9")])).unwrap();
        assert_eq!(p.int("m_hi"), 14);
        assert_eq!(p.float("tol"), 0.02);
        assert_eq!(p.floats("js"), &[2.0, 16.0]);
        assert!(p.flag("fast"));
        assert_eq!(p.seed(), 9);
        assert_eq!(p.echo()["js"], "2.0,16.0");
    }

    #[test]
    fn unknown_and_ill_typed_keys_fail() {
        assert!(matches!(Params::resolve(SCHEMA, &pairs(&[("m_max", "3")])), Err(Error::Config(_))));
        assert!(matches!(Params::resolve(SCHEMA, &pairs(&[("m_hi", "3.5")])), Err(Error::Config(_))));
        assert!(matches!(Params::resolve(SCHEMA, &pairs(&[("tol", "nan")])), Err(Error::Config(_))));
        assert!(matches!(Params::resolve(SCHEMA, &pairs(&[("seed", "-1")])), Err(Error::Config(_))));
    }

    #[test]
    fn config_text() {
        let a = parse_config_text("# comment\nm_hi = 12\n\n tol=0.5 \n").unwrap();
        assert_eq!(a, pairs(&[("m_hi", "12"), ("tol", "0.5")]));
        assert!(parse_config_text("m_hi = 1\nm_hi = 2\n").is_err());
        assert!(parse_config_text("no equals sign\n").is_err());
        assert!(parse_override("=3").is_err());
    }
}
