use std::time::Instant;

use dixlab_core::chain::LaurentChain;
use dixlab_core::seq::GaussRational as Q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cocycles::exact_b_relation_mismatches;
use super::{random_trig_exact, Experiment};
use crate::config::{ParamKind::*, ParamSpec, Params};
use crate::error::Result;
use crate::format::{read_chain, write_chain};
use crate::report::Session;

pub(super) const CHAIN_IDENTITIES: Experiment = Experiment {
    name: "chain-identities",
    module: "chain_alg",
    anchor: "Theorem \"somsdonadona\"",
    criterion: Some(7),
    summary: "exact chain algebra: b∘b = 0, Λ^{k+1} = id, b(wedge) = 0, h(1, .) = p c(.) diagonals",
    params: &[
        ParamSpec::new("chains", Int, "50", "random chains for b∘b and Λ"),
        ParamSpec::new("quadruples", Int, "25", "random commutative quadruples for b(wedge)"),
        ParamSpec::new("relation_tuples", Int, "10", "random tuples per p for h(1, .) = p c(.)"),
        ParamSpec::new("degree", Int, "5", "maximal frequency of the random factors"),
        ParamSpec::new("max_seconds", Float, "60", "runtime budget"),
    ],
    run: run_chains,
};

fn random_chain(rng: &mut ChaCha8Rng, degree: i64) -> Result<LaurentChain> {
    let k = rng.gen_range(1..=4);
    let terms = (0..rng.gen_range(1..=3))
        .map(|_| {
            let w = Q::from_ints(rng.gen_range(1..=5), rng.gen_range(-2..=2));
            (w, (0..=k).map(|_| random_trig_exact(rng, degree, 2)).collect())
        })
        .collect();
    Ok(LaurentChain::from_terms(terms)?)
}

fn run_chains(p: &Params, s: &mut Session) -> Result<()> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    let degree = p.int("degree");

    let (mut bb, mut lambda, mut roundtrip) = (0, 0, 0);
    for i in 0..p.uint("chains")? {
        let x = random_chain(&mut rng, degree)?;
        if x.degree() >= 2 && !x.boundary()?.boundary()?.is_zero() {
            bb += 1;
        }
        let mut y = x.clone();
        for _ in 0..=x.degree() {
            y = y.cyclic_lambda();
        }
        if y != x {
            lambda += 1;
        }
        let text = write_chain(&x);
        if read_chain::<Q>(&text)? != x {
            roundtrip += 1;
        }
        if i == 0 {
            s.artifact("inputs/chain0.txt", &text)?;
        }
    }
    s.equal("chains with b(b x) != 0", bb, 0);
    s.equal("chains with Λ^{k+1} x != x", lambda, 0);
    s.equal("chains changed by a text round trip", roundtrip, 0);

    let mut wedge_failures = 0;
    for _ in 0..p.uint("quadruples")? {
        let a: Vec<_> = (0..4).map(|_| random_trig_exact(&mut rng, degree, 3)).collect();
        if !LaurentChain::wedge(&a)?.boundary()?.is_zero() {
            wedge_failures += 1;
        }
    }
    s.equal("quadruples with b(a0 ∧ a1 ∧ a2 ∧ a3) != 0", wedge_failures, 0);

    let tuples = p.uint("relation_tuples")? as usize;
    for deg in [1u32, 3] {
        let mismatched = exact_b_relation_mismatches(&mut rng, deg, tuples)?;
        s.equal(&format!("tuples where diag h(1, .) != {deg} diag c(.) (p = {deg})"), mismatched, 0);
    }
    s.at_most("runtime seconds", start.elapsed().as_secs_f64(), p.float("max_seconds"));
    Ok(())
}
