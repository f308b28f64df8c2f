use std::collections::BTreeMap;
use std::time::Instant;

use dixlab_core::cocycle::{
    check_cyclicity, check_hochschild_cocycle, eval_c_omega, eval_wedge, evaluate, wedge_operator_path, Cochain, CochainEvaluation,
    FredholmModuleSpec,
};
use dixlab_core::seq::{BoundedSequence, CircleSeries, Complex, GaussRational as Q, HolderExponent, Scalar};
use dixlab_core::trace::{log_mean, probe, szego_product_diagonal, Schedule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{lacunary, level_param, random_trig, random_trig_exact, wedge_quadruple, Experiment};
use crate::config::{ParamKind::*, ParamSpec, Params};
use crate::error::Result;
use crate::format::{log_mean_csv, table_csv, write_series, ProbeSummary};
use crate::report::Session;

pub(super) const FOURTEDO_LIMIT: Experiment = Experiment {
    name: "fourtedo-limit",
    module: "cocycle_engine",
    anchor: "Theorem \"fourtedo\"",
    criterion: Some(2),
    summary: "wedge fast path on the lacunary quadruple: 1/m-extrapolated limit -2 sqrt2/log 2, cross-checked against the operator path",
    params: &[
        ParamSpec::new("level", Int, "40", "lacunary truncation level of the quadruple"),
        ParamSpec::new("m_lo", Int, "8", "first dyadic checkpoint exponent"),
        ParamSpec::new("m_hi", Int, "20", "last dyadic checkpoint exponent"),
        ParamSpec::new("cross_check_m", Int, "14", "operator path evaluated at checkpoints up to 2^cross_check_m"),
        ParamSpec::new("tol_extrap", Float, "0.02", "relative tolerance of the extrapolated limit"),
        ParamSpec::new("tol_paths", Float, "1e-8", "allowed fast/operator disagreement per checkpoint"),
        ParamSpec::new("max_seconds", Float, "300", "runtime budget"),
    ],
    run: run_fourtedo,
};

fn run_fourtedo(p: &Params, s: &mut Session) -> Result<()> {
    let start = Instant::now();
    let spec = FredholmModuleSpec::circle(3)?;
    let a = wedge_quadruple(level_param(p, "level")?)?;
    let schedule = Schedule::dyadic(level_param(p, "m_lo")?, level_param(p, "m_hi")?);

    let eval = eval_wedge(spec, &a, &schedule, None, 0.0)?;
    let pr = probe(&eval.fast)?;
    let target = -2.0 * std::f64::consts::SQRT_2 / std::f64::consts::LN_2;
    s.close_rel("extrapolated limit of the fast path", pr.extrap, target, p.float("tol_extrap"));
    s.equal("oscillation flag", pr.oscillating, false);
    s.measured("last checkpoint value", pr.last);

    let sub = schedule.truncated(1u64 << level_param(p, "cross_check_m")?);
    let operator = log_mean(&wedge_operator_path(spec, &a, sub.max_n())?, &sub)?;
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for (f, o) in eval.fast.points().iter().zip(operator.points()) {
        worst = worst.max((f.value - o.value).norm());
        rows.push(vec![f.m.unwrap_or(0) as f64, f.n as f64, f.value.re, o.value.re]);
    }
    s.measured("operator-path checkpoints compared", rows.len());
    s.at_most("max |fast - operator| over checkpoints", worst, p.float("tol_paths"));

    for (i, x) in a.iter().enumerate() {
        s.artifact(&format!("inputs/a{i}.series"), &write_series(x))?;
    }
    s.artifact("fast_path.csv", &log_mean_csv(&eval.fast)?)?;
    s.artifact("operator_path.csv", &log_mean_csv(&operator)?)?;
    s.artifact("paths.csv", &table_csv(&["m", "N", "fast", "operator"], &rows)?)?;
    s.json_artifact("probe.json", &ProbeSummary::from(&pr))?;
    s.at_most("runtime seconds", start.elapsed().as_secs_f64(), p.float("max_seconds"));
    Ok(())
}

pub(super) const COCYCLE_VANISHING: Experiment = Experiment {
    name: "hochschild-cocycle-vanishing",
    module: "cocycle_engine",
    anchor: "Theorem \"adpomopknad\"; Eq. \"caomoamdao\"",
    criterion: Some(4),
    summary: "c_omega and b h_omega on random trig polynomials: last checkpoint value and the C/log N envelope",
    params: &[
        ParamSpec::new("count", Int, "20", "random input tuples"),
        ParamSpec::new("degree", Int, "8", "maximal frequency of each input"),
        ParamSpec::new("m_lo", Int, "4", "first dyadic checkpoint exponent"),
        ParamSpec::new("m_hi", Int, "20", "last dyadic checkpoint exponent"),
        ParamSpec::new("tol_last", Float, "1e-2", "bound on |last checkpoint value|"),
        ParamSpec::new("max_seconds", Float, "120", "runtime budget"),
    ],
    run: run_vanishing,
};

/// Past the last nonzero diagonal position the log mean is `T / log(2+N)`
/// with `T` the finite trace. Returns the worst mismatch of `value log(2+N)`
/// against `T` (relative to `max(|T|, 1)`) and whether `|value|` is
/// nonincreasing there.
fn envelope(eval: &CochainEvaluation<Complex>) -> (f64, bool) {
    let support = eval.exact_diagonal.entries.keys().next_back().copied().unwrap_or(0);
    let total = eval.exact_diagonal.total();
    let scale = total.norm().max(1.0);
    let past: Vec<_> = eval.series.points().iter().filter(|pt| pt.n >= support).collect();
    let worst = past.iter().map(|pt| (pt.value * (2.0 + pt.n as f64).ln() - total).norm() / scale).fold(0.0, f64::max);
    let monotone = past.windows(2).all(|w| w[1].value.norm() <= w[0].value.norm() + 1e-12 * scale);
    (worst, monotone && !past.is_empty())
}

fn run_vanishing(p: &Params, s: &mut Session) -> Result<()> {
    let start = Instant::now();
    let schedule = Schedule::dyadic(level_param(p, "m_lo")?, level_param(p, "m_hi")?);
    let c_spec = FredholmModuleSpec::circle(3)?;
    let h_spec = FredholmModuleSpec::circle(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    let degree = p.int("degree");

    let (mut c_last, mut h_last, mut c_extrap, mut h_extrap, mut env_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut monotone = true;
    let mut rows = Vec::new();
    for t in 0..p.uint("count")? {
        let a: Vec<CircleSeries<Complex>> = (0..4).map(|_| random_trig(&mut rng, degree)).collect();
        let c = eval_c_omega(c_spec, &a, &schedule)?;
        let h = check_hochschild_cocycle(h_spec, &a, &schedule)?;
        for (eval, last, extrap) in [(&c, &mut c_last, &mut c_extrap), (&h, &mut h_last, &mut h_extrap)] {
            *last = last.max(eval.series.last().map_or(0.0, |pt| pt.value.norm()));
            *extrap = extrap.max(eval.probe.as_ref().map_or(0.0, |pr| pr.extrap.abs()));
            let (err, mono) = envelope(eval);
            env_err = env_err.max(err);
            monotone &= mono;
        }
        rows.push(vec![
            t as f64,
            c.exact_diagonal.total().norm(),
            c.series.last().map_or(0.0, |pt| pt.value.norm()),
            h.exact_diagonal.total().norm(),
            h.series.last().map_or(0.0, |pt| pt.value.norm()),
        ]);
        if t == 0 {
            for (i, x) in a.iter().enumerate() {
                s.artifact(&format!("inputs/tuple0_a{i}.series"), &write_series(x))?;
            }
            s.artifact("c_omega_tuple0.csv", &log_mean_csv(&c.series)?)?;
            s.artifact("b_h_omega_tuple0.csv", &log_mean_csv(&h.series)?)?;
        }
    }
    let tol = p.float("tol_last");
    s.at_most("max |c_omega last value| at the final checkpoint", c_last, tol);
    s.at_most("max |b h_omega last value| at the final checkpoint", h_last, tol);
    s.at_most("mismatch of value log(2+N) against the finite trace past the support", env_err, 1e-9);
    s.holds("|value| nonincreasing past the support", monotone, "every tuple, both cochains");
    s.measured("max |1/m extrapolation| of c_omega", c_extrap);
    s.measured("max |1/m extrapolation| of b h_omega", h_extrap);
    s.artifact("traces.csv", &table_csv(&["tuple", "c_trace", "c_last", "bh_trace", "bh_last"], &rows)?)?;
    s.at_most("runtime seconds", start.elapsed().as_secs_f64(), p.float("max_seconds"));
    Ok(())
}

pub(super) const B_RELATION: Experiment = Experiment {
    name: "b-relation",
    module: "cocycle_engine",
    anchor: "Theorem \"somsdonadona\"",
    criterion: None,
    summary: "h(1, .) = p c(.) entrywise on exact and lacunary inputs, and the p = 1 Szegő surrogate -4 kappa L",
    params: &[
        ParamSpec::new("level", Int, "12", "lacunary truncation level"),
        ParamSpec::new("m_lo", Int, "6", "first dyadic checkpoint exponent"),
        ParamSpec::new("m_hi", Int, "12", "last dyadic checkpoint exponent"),
        ParamSpec::new("alpha", Float, "0.5", "Hölder exponent of the p = 1 surrogate inputs"),
        ParamSpec::new("tol_entries", Float, "1e-12", "relative tolerance of the entrywise identities"),
    ],
    run: run_b_relation,
};

fn max_relative_gap(lhs: &CochainEvaluation<Complex>, rhs: &CochainEvaluation<Complex>, factor: f64) -> f64 {
    let keys: std::collections::BTreeSet<u64> = lhs.exact_diagonal.entries.keys().chain(rhs.exact_diagonal.entries.keys()).copied().collect();
    let zero = Complex::new(0.0, 0.0);
    keys.into_iter()
        .map(|k| {
            let l = lhs.exact_diagonal.entries.get(&k).copied().unwrap_or(zero);
            let r = rhs.exact_diagonal.entries.get(&k).copied().unwrap_or(zero) * factor;
            (l - r).norm() / r.norm().max(1e-300).max(l.norm())
        })
        .fold(0.0, f64::max)
}

/// Number of random exact `p+1`-tuples for which the diagonal of `h(1, a)`
/// differs from `p` times the diagonal of `c(a)` at some position.
pub(super) fn exact_b_relation_mismatches(rng: &mut ChaCha8Rng, p: u32, count: usize) -> Result<usize> {
    let spec = FredholmModuleSpec::circle(p)?;
    let reach = Schedule::dyadic(1, 7);
    let factor = Q::from_ints(p as i64, 0);
    let nonzero = |m: BTreeMap<u64, Q>| -> BTreeMap<u64, Q> { m.into_iter().filter(|(_, v)| !v.is_zero()).collect() };
    let mut mismatched = 0;
    for _ in 0..count {
        let inputs: Vec<_> = (0..=p).map(|_| random_trig_exact(rng, 4, 3)).collect();
        let mut with_one = vec![CircleSeries::one()];
        with_one.extend(inputs.iter().cloned());
        let h = evaluate(&Cochain::Hochschild(spec), &with_one, &reach)?;
        let c = eval_c_omega(spec, &inputs, &reach)?;
        let scaled = nonzero(c.exact_diagonal.entries.into_iter().map(|(k, v)| (k, factor.clone() * v)).collect());
        if !(h.exact_diagonal.complete && c.exact_diagonal.complete) || nonzero(h.exact_diagonal.entries) != scaled {
            mismatched += 1;
        }
    }
    Ok(mismatched)
}

fn run_b_relation(p: &Params, s: &mut Session) -> Result<()> {
    let level = level_param(p, "level")?;
    let schedule = Schedule::dyadic(level_param(p, "m_lo")?, level_param(p, "m_hi")?);
    let tol = p.float("tol_entries");

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    for deg in [1u32, 3] {
        let mismatched = exact_b_relation_mismatches(&mut rng, deg, 10)?;
        s.equal(&format!("exact tuples where h(1, .) and {deg} c(.) diagonals differ (p = {deg})"), mismatched, 0);
    }

    for deg in [1u32, 3] {
        let spec = FredholmModuleSpec::circle(deg)?;
        let inputs = if deg == 3 {
            wedge_quadruple(level)?
        } else {
            let a = lacunary(&BoundedSequence::ones(), 0.25, level)?;
            vec![a.clone(), a.conj()]
        };
        let mut with_one = vec![CircleSeries::one()];
        with_one.extend(inputs.iter().cloned());
        let h = evaluate(&Cochain::Hochschild(spec), &with_one, &schedule)?;
        let c = eval_c_omega(spec, &inputs, &schedule)?;
        s.at_most(&format!("max relative gap h(1, .) vs {deg} c(.) over diagonal entries (p = {deg})"), max_relative_gap(&h, &c, deg as f64), tol);
    }

    // p = 1 surrogate: on k >= 0 the diagonal of F[F,a][F,b] is -4 (P a (1-P) b P)_kk.
    let alpha = HolderExponent::new(p.float("alpha"))?;
    let (c1, c2) = (BoundedSequence::ones(), BoundedSequence::constant(Complex::new(0.5, 0.0)));
    let a = lacunary(&c1, alpha.alpha(), level)?;
    let b = lacunary(&c2, alpha.alpha(), level)?.conj();
    let spec = FredholmModuleSpec::circle(1)?;
    let c = eval_c_omega(spec, &[a, b], &schedule)?;
    let closed = szego_product_diagonal(&c1, &c2, alpha, level, schedule.max_n() + 1)?;
    let zero = Complex::new(0.0, 0.0);
    let mut worst = 0.0f64;
    for pos in 0..=schedule.max_n() {
        let entry = c.exact_diagonal.entries.get(&pos).copied().unwrap_or(zero);
        // symmetric order: even positions are k = pos/2 >= 0, odd ones k < 0
        let expected = if pos % 2 == 0 { closed.get(pos / 2) * -4.0 } else { zero };
        worst = worst.max((entry - expected).norm());
    }
    s.at_most("max |diag F[F,a][F,b] - (-4) closed form| (symmetric positions)", worst, tol);
    let pr = probe(&c.series)?;
    s.measured("1/m extrapolation of the p = 1 surrogate", pr.extrap);
    s.measured("-4 times 1/log 2 times L (L = 1/2)", -4.0 * 0.5 / std::f64::consts::LN_2);
    s.artifact("surrogate.csv", &log_mean_csv(&c.series)?)?;
    Ok(())
}

pub(super) const CYCLICITY: Experiment = Experiment {
    name: "cyclicity-check",
    module: "cocycle_engine",
    anchor: "Eq. \"caomoamdao\"",
    criterion: None,
    summary: "cyclicity defect c(a) - (-1)^p c(a_1..a_p, a_0): exact zero on trig polynomials, small log mean on lacunary inputs",
    params: &[
        ParamSpec::new("count", Int, "10", "random exact input tuples"),
        ParamSpec::new("degree", Int, "4", "maximal frequency of the random inputs"),
        ParamSpec::new("level", Int, "40", "lacunary truncation level"),
        ParamSpec::new("m_lo", Int, "6", "first dyadic checkpoint exponent"),
        ParamSpec::new("m_hi", Int, "20", "last dyadic checkpoint exponent"),
        ParamSpec::new("tol_last", Float, "1e-2", "bound on |last value| for the lacunary defect"),
    ],
    run: run_cyclicity,
};

fn run_cyclicity(p: &Params, s: &mut Session) -> Result<()> {
    let circle1 = FredholmModuleSpec::circle(1)?;
    let small = Schedule::dyadic(1, 4);
    let z = CircleSeries::<Q>::z_pow(1);
    let zi = CircleSeries::<Q>::z_pow(-1);
    let defect = check_cyclicity(circle1, &[z, zi], &small)?;
    s.equal("defect on (z, z^-1)", defect.exact.map(|q| q.to_string()).unwrap_or_else(|| "incomplete".into()), 0);

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    let degree = p.int("degree");
    let circle3 = FredholmModuleSpec::circle(3)?;
    let reach = Schedule::dyadic(1, (8 * degree as u64 + 2).next_power_of_two().trailing_zeros() + 1);
    let mut nonzero = 0;
    for _ in 0..p.uint("count")? {
        let a: Vec<_> = (0..4).map(|_| random_trig_exact(&mut rng, degree, 3)).collect();
        let d = check_cyclicity(circle3, &a, &reach)?;
        if d.exact.as_ref().is_none_or(|q| !q.is_zero()) {
            nonzero += 1;
        }
    }
    s.equal("random exact tuples with a nonzero or incomplete defect (p = 3)", nonzero, 0);

    let schedule = Schedule::dyadic(level_param(p, "m_lo")?, level_param(p, "m_hi")?);
    let a = wedge_quadruple(level_param(p, "level")?)?;
    let lac = check_cyclicity(circle3, &a, &schedule)?;
    let last = lac.series.last().map_or(0.0, |pt| pt.value.norm());
    s.at_most("|last value| of the lacunary defect (p = 3)", last, p.float("tol_last"));
    for pt in lac.series.points().iter().rev().take(2) {
        s.measured(&format!("defect times log(2+N) at N = {}", pt.n), pt.value.re * (2.0 + pt.n as f64).ln());
    }
    if let Some(pr) = &lac.probe {
        s.measured("1/m extrapolation of the lacunary defect", pr.extrap);
    }
    s.artifact("lacunary_defect.csv", &log_mean_csv(&lac.series)?)?;
    Ok(())
}
