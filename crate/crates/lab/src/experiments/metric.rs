use std::time::Instant;

use dixlab_core::metric::{
    cutoff_lemma, cutoff_profile, default_j_schedule, diagonal_decay_experiment, diverges, estimate_holder_seminorm, resolvable_j_schedule,
    stabilizes, DiagonalCutoff, SampledMetricSpace,
};
use dixlab_core::seq::BoundedSequence;

use super::{lacunary, level_param, Experiment};
use crate::config::{ParamKind::*, ParamSpec, Params};
use crate::error::{Error, Result};
use crate::format::{decay_csv, table_csv, DecaySummary};
use crate::report::Session;

pub(super) const DECAY: Experiment = Experiment {
    name: "approxomtienri-decay",
    module: "metric_lab",
    anchor: "Theorem \"approxomtienri\"",
    criterion: Some(8),
    summary: "C^alpha norm of Delta_j (f(y) - f(x)) for f in C^beta: fitted decay in j against gamma = min(1 - alpha/beta, beta - alpha)",
    params: &[
        ParamSpec::new("grid", Int, "1024", "circle grid size"),
        ParamSpec::new("pairs", FloatList, "0.3,0.9,0.2,0.5", "(alpha, beta) pairs, flattened"),
        ParamSpec::new("level", Int, "12", "lacunary level of the C^beta test function"),
        ParamSpec::new("slack", Float, "0.1", "the fitted slope must be <= -(gamma - slack)"),
        ParamSpec::new("max_seconds", Float, "300", "runtime budget"),
    ],
    run: run_decay,
};

/// `max |χ'|` by central differences on a fine grid of the profile's support.
fn profile_lipschitz() -> f64 {
    let h = 1e-6;
    (0..=100_000).map(|i| i as f64 * 1e-5).map(|t| (cutoff_profile(t + h) - cutoff_profile(t - h)).abs() / (2.0 * h)).fold(0.0, f64::max)
}

fn run_decay(p: &Params, s: &mut Session) -> Result<()> {
    let start = Instant::now();
    let x = SampledMetricSpace::circle(p.uint("grid")? as usize)?;
    let js = resolvable_j_schedule(&default_j_schedule(), &x);
    s.measured("cutoff indices resolvable on the grid", &js);

    let lip_bound = 2.0 * profile_lipschitz();
    let (mut diag_ok, mut support_ok, mut worst_lip) = (true, true, 0.0f64);
    for &j in &js {
        let lemma = cutoff_lemma(&x, DiagonalCutoff::new(j)?)?;
        diag_ok &= lemma.one_on_diagonal;
        support_ok &= lemma.support_inside;
        worst_lip = worst_lip.max(lemma.lipschitz_over_j);
    }
    s.holds("Delta_j = 1 on the diagonal", diag_ok, "every resolvable j");
    s.at_most("max Lip(Delta_j) / j", worst_lip, lip_bound);
    s.holds("supp Delta_j inside d(x,y) < 1/j", support_ok, "every resolvable j");

    let pairs = p.floats("pairs");
    if pairs.is_empty() || pairs.len() % 2 != 0 {
        return Err(Error::Config("`pairs` needs an even, nonzero number of entries".into()));
    }
    let level = level_param(p, "level")?;
    let slack = p.float("slack");
    for ab in pairs.chunks(2) {
        let (alpha, beta) = (ab[0], ab[1]);
        let f = lacunary(&BoundedSequence::ones(), beta, level)?;
        let report = diagonal_decay_experiment(&f, alpha, beta, &js, &x)?;
        let tag = format!("alpha={alpha}, beta={beta}");
        s.holds(&format!("nontrivial decay norms ({tag})"), !report.trivial, "some norm is nonzero");
        s.at_most(&format!("fitted slope ({tag})"), report.slope.unwrap_or(f64::NAN), -(report.gamma - slack));
        s.measured(&format!("gamma ({tag})"), report.gamma);
        s.artifact(&format!("decay_a{alpha}_b{beta}.csv"), &decay_csv(&report)?)?;
        s.json_artifact(&format!("decay_a{alpha}_b{beta}.json"), &DecaySummary::from(&report))?;
    }
    s.at_most("runtime seconds", start.elapsed().as_secs_f64(), p.float("max_seconds"));
    Ok(())
}

pub(super) const HOLDER_EMBEDDING: Experiment = Experiment {
    name: "holder-embedding",
    module: "metric_lab",
    anchor: "Prop. \"asifnaoidnadi0n\"",
    criterion: None,
    summary: "grid Hölder seminorms of lacunary series: stabilization at the critical exponent, divergence above it",
    params: &[
        ParamSpec::new("stable_grids", IntList, "16,17,18", "grid exponents for the alpha = beta check"),
        ParamSpec::new("divergent_grids", IntList, "12,13,14,15", "grid exponents for the alpha > beta check"),
        ParamSpec::new("beta", Float, "0.5", "exponent of the lacunary weights"),
        ParamSpec::new("alpha_above", Float, "0.6", "seminorm exponent above beta"),
        ParamSpec::new("alternating_levels", IntList, "12,14,16,18,20", "levels for the alternating quarter series"),
        ParamSpec::new("alternating_grid", Int, "16", "grid exponent for the level sweep"),
    ],
    run: run_holder,
};

fn refinement(beta: f64, alpha: f64, exponents: &[i64]) -> Result<Vec<f64>> {
    exponents
        .iter()
        .map(|&e| {
            let e = u32::try_from(e).map_err(|_| Error::Config("grid exponents must be nonnegative".into()))?;
            let x = SampledMetricSpace::circle(1 << e)?;
            Ok(estimate_holder_seminorm(&lacunary(&BoundedSequence::ones(), beta, e)?, &x, alpha)?.value)
        })
        .collect()
}

fn run_holder(p: &Params, s: &mut Session) -> Result<()> {
    let beta = p.float("beta");
    let stable = refinement(beta, beta, p.ints("stable_grids"))?;
    s.holds("alpha = beta stabilizes under refinement", stabilizes(&stable), format!("{stable:?}"));
    let above = refinement(beta, p.float("alpha_above"), p.ints("divergent_grids"))?;
    s.holds("alpha > beta diverges under refinement", diverges(&above), format!("{above:?}"));

    let x = SampledMetricSpace::circle(1 << level_param(p, "alternating_grid")?)?;
    let mut sweep = Vec::new();
    for &level in p.ints("alternating_levels") {
        let level = u32::try_from(level).map_err(|_| Error::Config("levels must be nonnegative".into()))?;
        let f = lacunary(&BoundedSequence::alternating(), 0.25, level)?;
        sweep.push(estimate_holder_seminorm(&f, &x, 0.25)?.value);
    }
    s.holds("alternating quarter series stabilizes in the level", stabilizes(&sweep), format!("{sweep:?}"));
    s.measured("alternating quarter seminorm at the last level", sweep.last().copied());

    let rows: Vec<Vec<f64>> = p.ints("stable_grids").iter().zip(&stable).map(|(e, v)| vec![*e as f64, beta, *v]).collect();
    s.artifact("refinement.csv", &table_csv(&["grid_exponent", "alpha", "seminorm"], &rows)?)?;
    Ok(())
}
