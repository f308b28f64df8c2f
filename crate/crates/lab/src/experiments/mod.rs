//! Named experiments: each binds a schema of parameters to a routine that
//! records assertions and writes artifacts through a [`Session`].

mod chains;
mod cocycles;
mod metric;
mod pairing;
mod spectra;
mod szego;
mod torus;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use dixlab_core::seq::{lacunary_series, BoundedSequence, CircleSeries, Complex, GaussRational, HolderExponent};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::{parse_config_text, parse_override, ExperimentConfig, ParamSpec, Params};
use crate::error::{Error, Result};
use crate::report::{write_report, ExperimentReport, Session};

pub struct Experiment {
    pub name: &'static str,
    /// Library module the experiment exercises.
    pub module: &'static str,
    /// Label of the statement the experiment reproduces.
    pub anchor: &'static str,
    /// Acceptance criterion number, when the experiment is one.
    pub criterion: Option<u8>,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub run: fn(&Params, &mut Session) -> Result<()>,
}

static CATALOG: &[Experiment] = &[
    pairing::LKANDAPDN_PAIRING,
    cocycles::FOURTEDO_LIMIT,
    szego::CALIBRATION,
    cocycles::COCYCLE_VANISHING,
    spectra::SVD_DECAY,
    torus::KERNEL_EQUIVALENCE,
    chains::CHAIN_IDENTITIES,
    metric::DECAY,
    szego::EXTENDED_LIMIT,
    cocycles::B_RELATION,
    cocycles::CYCLICITY,
    metric::HOLDER_EMBEDDING,
    pairing::CH_CC_STABILITY,
    torus::SHELL_PERMUTATION,
];

/// Every registered experiment, in a fixed order.
pub fn catalog() -> &'static [Experiment] {
    CATALOG
}

pub fn find(name: &str) -> Result<&'static Experiment> {
    CATALOG.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}

/// The experiment for acceptance criterion `n`.
pub fn for_criterion(n: u8) -> Option<&'static Experiment> {
    CATALOG.iter().find(|e| e.criterion == Some(n))
}

/// Validates a config file's text and `key=value` overrides against the
/// experiment's schema. Nothing touches the filesystem here.
pub fn configure(name: &str, config_text: Option<&str>, overrides: &[String], out_dir: &Path) -> Result<ExperimentConfig> {
    let exp = find(name)?;
    let mut assignments = match config_text {
        Some(text) => parse_config_text(text)?,
        None => Vec::new(),
    };
    for o in overrides {
        assignments.push(parse_override(o)?);
    }
    let params = Params::resolve(exp.params, &assignments)?;
    Ok(ExperimentConfig { experiment: name.to_string(), params, out_dir: out_dir.to_path_buf() })
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic without message".into())
}

/// Runs a validated config and writes `report.json`, also when the routine
/// fails or an assertion does not hold.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let exp = find(&config.experiment)?;
    let start = Instant::now();
    let mut session = Session::new(&config.out_dir, config.params.seed());
    let outcome = catch_unwind(AssertUnwindSafe(|| (exp.run)(&config.params, &mut session)));
    let error = match outcome {
        Ok(Ok(())) => None,
        Ok(Err(e)) => Some(e.to_string()),
        Err(p) => Some(format!("panic: {}", panic_message(p))),
    };
    let (assertions, artifacts) = session.into_parts();
    let passed = error.is_none() && !assertions.is_empty() && assertions.iter().all(|a| a.passed);
    let report = ExperimentReport {
        experiment: exp.name.into(),
        module: exp.module.into(),
        anchor: exp.anchor.into(),
        config: config.params.echo(),
        assertions,
        artifacts,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        error,
        passed,
    };
    write_report(&config.out_dir, &report)?;
    Ok(report)
}

/// Runs an experiment with its default parameters.
pub fn run_default(name: &str, out_dir: &Path) -> Result<ExperimentReport> {
    run(&configure(name, None, &[], out_dir)?)
}

/// `𝔚_α(c)` truncated at `level`.
pub(crate) fn lacunary(c: &BoundedSequence, alpha: f64, level: u32) -> Result<CircleSeries<Complex>> {
    Ok(lacunary_series(c, HolderExponent::new(alpha)?, level)?)
}

/// The witness quadruple `𝔚(alt), 𝔚(alt)*, 𝔚(1), 𝔚(1)*` at exponent 1/4.
pub(crate) fn wedge_quadruple(level: u32) -> Result<Vec<CircleSeries<Complex>>> {
    let alt = lacunary(&BoundedSequence::alternating(), 0.25, level)?;
    let ones = lacunary(&BoundedSequence::ones(), 0.25, level)?;
    Ok(vec![alt.clone(), alt.conj(), ones.clone(), ones.conj()])
}

/// Dense trig polynomial on `-degree..=degree` with coefficients in the unit square.
pub(crate) fn random_trig(rng: &mut ChaCha8Rng, degree: i64) -> CircleSeries<Complex> {
    CircleSeries::from_terms((-degree..=degree).map(|k| (k, Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))))
}

/// Sparse exact trig polynomial: `terms` monomials with small nonzero Gaussian-integer coefficients.
pub(crate) fn random_trig_exact(rng: &mut ChaCha8Rng, degree: i64, terms: usize) -> CircleSeries<GaussRational> {
    CircleSeries::from_terms((0..terms).map(|_| {
        let (re, im) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let re = if re == 0 && im == 0 { 1 } else { re };
        (rng.gen_range(-degree..=degree), GaussRational::from_ints(re, im))
    }))
}

pub(crate) fn level_param(p: &Params, key: &str) -> Result<u32> {
    u32::try_from(p.int(key)).map_err(|_| Error::Config(format!("`{key}` must be a nonnegative level")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn catalog_is_complete_and_consistent() {
        let names: HashSet<&str> = catalog().iter().map(|e| e.name).collect();
        assert_eq!(names.len(), catalog().len());
        assert!(catalog().len() >= 12);
        for required in [
            "lkandapdn-pairing",
            "compmpmpnpanf-calibration",
            "fourtedo-limit",
            "adnaodnaond-kernel-equivalence",
            "approxomtienri-decay",
            "hochschild-cocycle-vanishing",
            "svd-decay-szego",
            "chain-identities",
        ] {
            assert!(names.contains(required), "{required}");
        }
        for n in 1..=9 {
            assert!(for_criterion(n).is_some(), "criterion {n}");
        }
        let modules = ["seq_core", "op_core", "trace_lab", "cocycle_engine", "chain_alg", "metric_lab"];
        assert!(catalog().iter().all(|e| modules.contains(&e.module) && !e.anchor.is_empty()));
    }

    #[test]
    fn every_default_schema_resolves() {
        for e in catalog() {
            Params::resolve(e.params, &[]).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn configure_rejects_before_running() {
        let dir = Path::new("/nonexistent/should-not-be-created");
        assert!(matches!(configure("no-such", None, &[], dir), Err(Error::UnknownExperiment(_))));
        assert!(matches!(configure("lkandapdn-pairing", Some("radius = x\n"), &[], dir), Err(Error::Config(_))));
        assert!(matches!(configure("lkandapdn-pairing", None, &["bogus=1".into()], dir), Err(Error::Config(_))));
        assert!(!dir.exists());
    }
}
