use dixlab_core::chain::{pair_exact, LaurentChain};
use dixlab_core::cocycle::{eval_c_omega, eval_ch_cc, connes_chern_constant, Cochain, FredholmModuleSpec};
use dixlab_core::op::{commutator, compose, Factor, OperatorModel, OperatorRecipe, SparseOperator, TruncationWindow};
use dixlab_core::seq::{CircleSeries, Complex, FourierSeries, GaussRational as Q, Scalar, TorusIndex};
use dixlab_core::trace::{diagonal_of_operator, log_mean, Schedule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{random_trig, Experiment};
use crate::config::{ParamKind::*, ParamSpec, Params};
use crate::error::Result;
use crate::format::{log_mean_csv, write_chain, write_coo, write_series};
use crate::oracle::{dense_circle_phase, Dense};
use crate::report::Session;

pub(super) const LKANDAPDN_PAIRING: Experiment = Experiment {
    name: "lkandapdn-pairing",
    module: "cocycle_engine",
    anchor: "Prop. \"lkandapdn\"",
    criterion: Some(1),
    summary: "exact trace of F[F,z][F,z^-1] (-4) and the 1/4-normalized pairing with z⊗z^-1 (-1)",
    params: &[
        ParamSpec::new("radius", Int, "6", "symmetric window {-radius..radius} for the sparse product"),
        ParamSpec::new("max_seconds", Float, "1", "runtime budget"),
    ],
    run: run_pairing,
};

fn run_pairing(p: &Params, s: &mut Session) -> Result<()> {
    let start = std::time::Instant::now();
    let radius = p.uint("radius")?;
    let w = TruncationWindow::Symmetric(radius);
    let z = CircleSeries::<Q>::z_pow(1);
    let zi = CircleSeries::<Q>::z_pow(-1);

    let phase = SparseOperator::from_recipe(&OperatorRecipe::new(vec![Factor::Phase(OperatorModel::CircleF)]), w)?;
    let product = compose(w, &[phase, commutator(OperatorModel::CircleF, &z, w)?, commutator(OperatorModel::CircleF, &zi, w)?])?;
    let trace = product.diagonal()?.into_iter().fold(Q::zero(), |a, b| a + b);
    s.equal("raw trace of F[F,z][F,z^-1] (sparse composition)", &trace, -4);

    let r = radius as i64;
    let f = dense_circle_phase::<Q>(-r, r);
    let dense = f
        .mul(&f.commutator(&Dense::multiplication(&z, -r, r)))
        .mul(&f.commutator(&Dense::multiplication(&zi, -r, r)))
        .trace();
    s.equal("raw trace (dense oracle)", &dense, &trace);

    let chain = LaurentChain::elementary(vec![z.clone(), zi.clone()])?;
    let pairing = pair_exact(&Cochain::circle_pairing(), &chain)?;
    s.equal("pairing with z⊗z^-1 under the 1/4 normalization", &pairing, -1);

    let schedule = Schedule::dyadic(1, 6);
    let eval = eval_c_omega(FredholmModuleSpec::circle(1)?, &[z.clone(), zi.clone()], &schedule)?;
    s.equal("c_omega(z, z^-1) reports an exact value", eval.exact.as_ref().map(Q::to_string).unwrap_or_default(), -4);

    s.artifact("inputs/a0.series", &write_series(&z))?;
    s.artifact("inputs/a1.series", &write_series(&zi))?;
    s.artifact("inputs/chain.txt", &write_chain(&chain))?;
    s.artifact("product.coo", &write_coo(&product))?;
    s.artifact("log_mean.csv", &log_mean_csv(&log_mean(&diagonal_of_operator(&product)?, &Schedule::uniform(1, 2 * radius))?)?)?;
    s.at_most("runtime seconds", start.elapsed().as_secs_f64(), p.float("max_seconds"));
    Ok(())
}

pub(super) const CH_CC_STABILITY: Experiment = Experiment {
    name: "ch-cc-stability",
    module: "cocycle_engine",
    anchor: "Theorem \"conoancoand\"",
    criterion: None,
    summary: "Connes-Chern character: constants, exact finite-rank values and window-doubling stability",
    params: &[
        ParamSpec::new("count", Int, "10", "random trig-polynomial pairs"),
        ParamSpec::new("degree", Int, "4", "maximal frequency of the random inputs"),
        ParamSpec::new("tol_drift", Float, "1e-10", "allowed change under window doubling"),
    ],
    run: run_ch_cc,
};

fn run_ch_cc(p: &Params, s: &mut Session) -> Result<()> {
    let circle = FredholmModuleSpec::circle(1)?;
    let z = CircleSeries::<Q>::z_pow(1);
    let zi = CircleSeries::<Q>::z_pow(-1);
    let winding = eval_ch_cc(circle, &[z.clone(), zi], 0.0)?;
    s.equal("raw trace on (z, z^-1)", &winding.raw, -4);
    let expected_c1 = Complex::new(1.0, 1.0) * std::f64::consts::PI.sqrt() / 2.0;
    s.close("c_1 = sqrt(2i) Gamma(3/2)", (winding.constant - expected_c1).norm(), 0.0, 1e-15);
    s.close("ch_CC(z, z^-1) = -4 c_1", (winding.value - expected_c1 * -4.0).norm(), 0.0, 1e-14);
    s.close("c_2 = -Gamma(2)", (connes_chern_constant(2) - Complex::new(-1.0, 0.0)).norm(), 0.0, 1e-15);
    let trivial = eval_ch_cc(circle, &[CircleSeries::<Q>::one(), z], 0.0)?;
    s.equal("ch_CC(1, z)", &trivial.raw, 0);

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    let degree = p.int("degree");
    let tol = p.float("tol_drift");
    let mut worst = 0.0f64;
    let mut failures = 0;
    for i in 0..p.uint("count")? {
        let a = [random_trig(&mut rng, degree), random_trig(&mut rng, degree)];
        match eval_ch_cc(circle, &a, tol) {
            Ok(e) => worst = worst.max(e.drift),
            Err(_) => failures += 1,
        }
        if i == 0 {
            s.artifact("inputs/circle_a0.series", &write_series(&a[0]))?;
            s.artifact("inputs/circle_a1.series", &write_series(&a[1]))?;
        }
    }
    s.equal("circle inputs rejected for drift", failures, 0);
    s.at_most("worst circle drift under window doubling", worst, tol);

    let torus = FredholmModuleSpec::torus(2)?;
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let a: Vec<FourierSeries<TorusIndex, Complex>> = (0..3)
            .map(|_| {
                FourierSeries::from_terms((0..4).map(|_| {
                    let k = TorusIndex::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                    (k, Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                }))
            })
            .collect();
        worst = worst.max(eval_ch_cc(torus, &a, f64::INFINITY)?.drift);
    }
    // torus commutators with trig polynomials are not finite rank, so the
    // windowed trace keeps moving; recorded only
    s.measured("worst torus drift under window doubling", worst);
    Ok(())
}
