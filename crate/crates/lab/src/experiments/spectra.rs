use std::time::Instant;

use dixlab_core::op::{commutator, lacunary_szego_singular_values, singular_values, weak_quasinorm, OperatorModel, TruncationWindow};
use dixlab_core::seq::lacunary::lacunary_weights;
use dixlab_core::seq::{BoundedSequence, HolderExponent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{level_param, random_trig, Experiment};
use crate::config::{ParamKind::*, ParamSpec, Params};
use crate::error::{Error, Result};
use crate::format::singular_values_csv;
use crate::report::Session;

pub(super) const SVD_DECAY: Experiment = Experiment {
    name: "svd-decay-szego",
    module: "op_core",
    anchor: "Theorem \"adpnapkdnasp\"",
    criterion: Some(5),
    summary: "singular values of [P, W_1/2(1)] at window 2^13: log-log slope -1/2; exact zero tail for trig polynomials",
    params: &[
        ParamSpec::new("alpha", Float, "0.5", "Hölder exponent of the lacunary series"),
        ParamSpec::new("level", Int, "13", "lacunary level, i.e. window 2^level"),
        ParamSpec::new("k_lo", Int, "32", "first index of the slope fit"),
        ParamSpec::new("k_hi", Int, "2048", "last index of the slope fit"),
        ParamSpec::new("expected_slope", Float, "-0.5", "target log-log slope"),
        ParamSpec::new("tol_slope", Float, "0.1", "absolute tolerance of the slope"),
        ParamSpec::new("poly_count", Int, "5", "random trig polynomials for the finite-rank check"),
        ParamSpec::new("poly_degree", Int, "6", "their maximal frequency"),
        ParamSpec::new("poly_radius", Int, "64", "symmetric window of the finite-rank check"),
        ParamSpec::new("max_seconds", Float, "180", "runtime budget"),
    ],
    run: run_svd_decay,
};

fn run_svd_decay(p: &Params, s: &mut Session) -> Result<()> {
    let start = Instant::now();
    let alpha = HolderExponent::new(p.float("alpha"))?;
    let weights: Vec<f64> = lacunary_weights(&BoundedSequence::ones(), alpha, level_param(p, "level")?)?.iter().map(|w| w.re).collect();
    let mu = lacunary_szego_singular_values(&weights)?;
    let (lo, hi) = (p.uint("k_lo")? as usize, p.uint("k_hi")? as usize);
    let fit = mu.loglog_slope(lo, hi).ok_or_else(|| Error::Config(format!("no positive singular values in [{lo}, {hi}]")))?;
    s.close("log-log slope of mu_k", fit.slope, p.float("expected_slope"), p.float("tol_slope"));
    s.measured("slope fit residual", fit.residual);
    s.measured("weak L^{2,inf} quasinorm sup", weak_quasinorm(&mu, 2.0)?.sup);
    s.artifact("singular_values.csv", &singular_values_csv(&mu)?)?;

    let radius = p.uint("poly_radius")?;
    let w = TruncationWindow::Symmetric(radius);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    let mut worst_tail = 0.0f64;
    let mut max_rank = 0;
    for i in 0..p.uint("poly_count")? {
        let a = random_trig(&mut rng, p.int("poly_degree"));
        let op = commutator(OperatorModel::SzegoP, &a, w)?;
        let sv = singular_values(&op, w.size() as usize)?;
        let q = weak_quasinorm(&sv, 1.0)?;
        worst_tail = worst_tail.max(q.tail_sup);
        max_rank = max_rank.max(sv.values().iter().filter(|v| **v > 0.0).count());
        if i == 0 {
            s.artifact("poly_singular_values.csv", &singular_values_csv(&sv)?)?;
        }
    }
    s.measured("largest numerical rank among trig polynomials", max_rank);
    s.equal("tail-window weak quasinorm sup (trig polynomials)", worst_tail, 0.0);
    s.at_most("runtime seconds", start.elapsed().as_secs_f64(), p.float("max_seconds"));
    Ok(())
}
