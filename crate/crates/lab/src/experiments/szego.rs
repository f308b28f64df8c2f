use dixlab_core::seq::{BoundedSequence, Complex, HolderExponent};
use dixlab_core::trace::{log_mean, probe, probe_with, szego_product_diagonal, ExtendedLimitProbe, LogMeanSeries, Part, Schedule};

use super::{lacunary, level_param, Experiment};
use crate::config::{ParamKind::*, ParamSpec, Params};
use crate::error::Result;
use crate::format::{log_mean_csv, table_csv, ProbeSummary};
use crate::oracle::dense_szego_product_diagonal;
use crate::report::Session;

const COMMON: [ParamSpec; 4] = [
    ParamSpec::new("alpha", Float, "0.5", "Hölder exponent of both lacunary inputs"),
    ParamSpec::new("level", Int, "40", "lacunary truncation level"),
    ParamSpec::new("m_lo", Int, "8", "first dyadic checkpoint exponent"),
    ParamSpec::new("m_hi", Int, "24", "last dyadic checkpoint exponent"),
];

pub(super) const CALIBRATION: Experiment = Experiment {
    name: "compmpmpnpanf-calibration",
    module: "trace_lab",
    anchor: "Eq. \"compmpmpnpanf\"",
    criterion: Some(3),
    summary: "Szegő product diagonal: dense brute force at window 512, kappa from c = 1, proportionality on three sequences",
    params: &[
        COMMON[0],
        COMMON[1],
        COMMON[2],
        COMMON[3],
        ParamSpec::new("oracle_window", Int, "512", "diagonal entries compared against dense products"),
        ParamSpec::new("oracle_level", Int, "9", "lacunary level for the dense comparison"),
        ParamSpec::new("tol_oracle", Float, "1e-12", "absolute tolerance of the dense comparison"),
        ParamSpec::new("tol_kappa", Float, "0.01", "relative tolerance of kappa against 1/log 2"),
        ParamSpec::new("tol_proportional", Float, "0.02", "relative tolerance of kappa L"),
        ParamSpec::new("max_seconds", Float, "60", "runtime budget"),
    ],
    run: run_calibration,
};

struct Setup {
    alpha: HolderExponent,
    level: u32,
    schedule: Schedule,
}

fn setup(p: &Params) -> Result<Setup> {
    Ok(Setup {
        alpha: HolderExponent::new(p.float("alpha"))?,
        level: level_param(p, "level")?,
        schedule: Schedule::dyadic(level_param(p, "m_lo")?, level_param(p, "m_hi")?),
    })
}

fn product_series(st: &Setup, c1: &BoundedSequence, c2: &BoundedSequence) -> Result<LogMeanSeries> {
    let d = szego_product_diagonal(c1, c2, st.alpha, st.level, st.schedule.max_n() + 1)?;
    Ok(log_mean(&d, &st.schedule)?)
}

/// `κ` as the extrapolated limit of the `c1 c2* = 1` series.
fn calibrate(st: &Setup) -> Result<(LogMeanSeries, ExtendedLimitProbe)> {
    let series = product_series(st, &BoundedSequence::ones(), &BoundedSequence::ones())?;
    let pr = probe(&series)?;
    Ok((series, pr))
}

fn run_calibration(p: &Params, s: &mut Session) -> Result<()> {
    let start = std::time::Instant::now();
    let st = setup(p)?;

    // Dense brute force against the closed form.
    let n = p.uint("oracle_window")? as usize;
    let oracle_level = level_param(p, "oracle_level")?;
    let alpha = st.alpha.alpha();
    let i = Complex::new(0.0, 1.0);
    let cases = [
        ("ones", BoundedSequence::ones(), BoundedSequence::ones()),
        ("dyadic_alternating", BoundedSequence::dyadic_alternating(), BoundedSequence::ones()),
        ("complex", BoundedSequence::from_fn(1.0, move |j| if j % 3 == 0 { i } else { Complex::new(0.6, -0.8) }), BoundedSequence::alternating()),
    ];
    let mut rows = Vec::new();
    for (label, c1, c2) in &cases {
        let dense = dense_szego_product_diagonal(&lacunary(c1, alpha, oracle_level)?, &lacunary(c2, alpha, oracle_level)?, n);
        let closed = szego_product_diagonal(c1, c2, st.alpha, oracle_level, n as u64)?;
        let mut worst = 0.0f64;
        for (k, v) in dense.iter().enumerate() {
            let c = closed.get(k as u64);
            worst = worst.max((c - v).norm());
            if *label == "ones" {
                rows.push(vec![k as f64, v.re, c.re]);
            }
        }
        s.at_most(&format!("closed form vs dense product ({label})"), worst, p.float("tol_oracle"));
    }
    s.artifact("oracle_ones.csv", &table_csv(&["k", "dense", "closed_form"], &rows)?)?;

    let (series, kappa_probe) = calibrate(&st)?;
    let kappa = kappa_probe.extrap;
    s.close_rel("kappa (c1 c2* = 1)", kappa, 1.0 / std::f64::consts::LN_2, p.float("tol_kappa"));
    s.at_least("|extrapolation| of the c1 c2* = 1 witness", kappa.abs(), 0.5);
    s.artifact("log_mean_ones.csv", &log_mean_csv(&series)?)?;
    s.json_artifact("probe_ones.json", &ProbeSummary::from(&kappa_probe))?;

    let tests = [
        ("half", BoundedSequence::constant(Complex::new(0.5, 0.0)), BoundedSequence::ones(), 0.5),
        ("one_plus_two_to_minus_j", BoundedSequence::from_fn(2.0, |j| Complex::new(1.0 + (-(j as f64)).exp2(), 0.0)), BoundedSequence::ones(), 1.0),
        ("i_times_conj_i", BoundedSequence::constant(i), BoundedSequence::constant(i), 1.0),
    ];
    for (label, c1, c2, limit) in &tests {
        let series = product_series(&st, c1, c2)?;
        let pr = probe(&series)?;
        s.close_rel(&format!("probe of {label} vs kappa L"), pr.extrap, kappa * limit, p.float("tol_proportional"));
        s.artifact(&format!("log_mean_{label}.csv"), &log_mean_csv(&series)?)?;
        s.json_artifact(&format!("probe_{label}.json"), &ProbeSummary::from(&pr))?;
    }
    s.at_most("runtime seconds", start.elapsed().as_secs_f64(), p.float("max_seconds"));
    Ok(())
}

pub(super) const EXTENDED_LIMIT: Experiment = Experiment {
    name: "extended-limit-sensitivity",
    module: "trace_lab",
    anchor: "Corollary, copy of (l^inf/c_0)^*",
    criterion: Some(9),
    summary: "dyadic-block alternating Szegő product: oscillating probe with min/max separated by at least 0.2 kappa",
    params: &[
        COMMON[0],
        COMMON[1],
        COMMON[2],
        COMMON[3],
        ParamSpec::new("tail", Int, "17", "checkpoints in the probe window (all of m_lo..m_hi by default)"),
        ParamSpec::new("min_separation", Float, "0.2", "required (max - min) in units of kappa"),
    ],
    run: run_extended_limit,
};

fn run_extended_limit(p: &Params, s: &mut Session) -> Result<()> {
    let st = setup(p)?;
    let (_, kappa_probe) = calibrate(&st)?;
    let kappa = kappa_probe.extrap;
    s.measured("kappa", kappa);

    let series = product_series(&st, &BoundedSequence::dyadic_alternating(), &BoundedSequence::ones())?;
    let pr = probe_with(&series, Part::Re, p.uint("tail")? as usize)?;
    s.equal("oscillation flag", pr.oscillating, true);
    s.at_least("(max - min) / kappa", pr.spread() / kappa, p.float("min_separation"));
    let short = probe(&series)?;
    s.measured("(max - min) / kappa over the default 6-point tail", short.spread() / kappa);
    s.artifact("log_mean.csv", &log_mean_csv(&series)?)?;
    s.json_artifact("probe.json", &ProbeSummary::from(&pr))?;
    Ok(())
}
