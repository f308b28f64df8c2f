use std::time::Instant;

use dixlab_core::cocycle::{evaluate_on, Cochain, FredholmModuleSpec};
use dixlab_core::op::{kernel_diagonal, modulus_one_identity, rho, rho_exact, TruncationWindow};
use dixlab_core::seq::{Complex, FourierSeries, TorusIndex};
use dixlab_core::trace::{log_mean, DiagonalOrder, DiagonalSequence, Schedule};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{level_param, Experiment};
use crate::config::{ParamKind::*, ParamSpec, Params};
use crate::error::Result;
use crate::format::{log_mean_csv, table_csv, write_series};
use crate::report::Session;

type TorusSeries = FourierSeries<TorusIndex, Complex>;

pub(super) const KERNEL_EQUIVALENCE: Experiment = Experiment {
    name: "adnaodnaond-kernel-equivalence",
    module: "op_core",
    anchor: "Theorem \"adnaodnaond\"",
    criterion: Some(6),
    summary: "torus phase kernel: exact homogeneity and antisymmetry, the modulus-one identity, operator vs kernel diagonals on E_N",
    params: &[
        ParamSpec::new("triples", Int, "100", "random frequency triples for the exact kernel identities"),
        ParamSpec::new("reach", Int, "20", "coordinate range of the random triples"),
        ParamSpec::new("modulus_samples", Int, "1000", "random unit triples for the modulus-one identity"),
        ParamSpec::new("polys", Int, "5", "random trig-polynomial triples"),
        ParamSpec::new("degree", Int, "3", "maximal coordinate of their frequencies"),
        ParamSpec::new("shells", IntList, "4,17,200", "Laplacian windows E_N"),
        ParamSpec::new("tol_modulus", Float, "1e-12", "tolerance of the modulus-one identity"),
        ParamSpec::new("tol_diagonal", Float, "1e-10", "tolerance of operator vs kernel diagonals and sums"),
        ParamSpec::new("max_seconds", Float, "120", "runtime budget"),
    ],
    run: run_kernel,
};

fn random_index(rng: &mut ChaCha8Rng, reach: i64) -> TorusIndex {
    TorusIndex::new(rng.gen_range(-reach..=reach), rng.gen_range(-reach..=reach))
}

fn random_torus_poly(rng: &mut ChaCha8Rng, degree: i64) -> TorusSeries {
    FourierSeries::from_terms((0..4).map(|_| (random_index(rng, degree), Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))))
}

fn run_kernel(p: &Params, s: &mut Session) -> Result<()> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    let reach = p.int("reach");

    let (mut checked, mut skipped, mut homogeneity_failures, mut antisymmetry_failures) = (0u64, 0u64, 0u64, 0u64);
    let mut float_antisymmetry = 0.0f64;
    while checked < p.uint("triples")? {
        let (k, m, n) = (random_index(&mut rng, reach), random_index(&mut rng, reach), random_index(&mut rng, reach));
        // degenerate points (k, k+m or k+n at the origin) have no kernel value
        let Ok(base) = rho_exact(k, m, n) else {
            skipped += 1;
            continue;
        };
        checked += 1;
        for t in [2, 3, 7] {
            if rho_exact(k.scaled(t), m.scaled(t), n.scaled(t))? != base {
                homogeneity_failures += 1;
            }
        }
        if rho_exact(k, n, m)? != base.neg() {
            antisymmetry_failures += 1;
        }
        float_antisymmetry = float_antisymmetry.max((rho(k, n, m)? + rho(k, m, n)?).abs());
    }
    s.measured("degenerate triples redrawn", skipped);
    s.equal("homogeneity failures (t = 2, 3, 7; exact surds)", homogeneity_failures, 0);
    s.equal("antisymmetry failures (exact surds)", antisymmetry_failures, 0);
    s.measured("max |rho(k,n,m) + rho(k,m,n)| in floats", float_antisymmetry);

    let mut worst = 0.0f64;
    for _ in 0..p.uint("modulus_samples")? {
        let mut unit = || Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let (lhs, rhs) = modulus_one_identity(unit(), unit(), unit());
        worst = worst.max((lhs - rhs).norm());
    }
    s.at_most("max modulus-one identity residual", worst, p.float("tol_modulus"));

    let spec = FredholmModuleSpec::torus(2)?;
    let (mut entry_gap, mut sum_gap) = (0.0f64, 0.0f64);
    let mut rows = Vec::new();
    for t in 0..p.uint("polys")? {
        let a: Vec<TorusSeries> = (0..3).map(|_| random_torus_poly(&mut rng, p.int("degree"))).collect();
        for &shells in p.ints("shells") {
            let w = TruncationWindow::Shells(shells as u64);
            let eval = evaluate_on(&Cochain::Cyclic(spec), &a, w, &Schedule::dyadic(0, 2))?;
            let (mut op_sum, mut ker_sum) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
            for (pos, k) in w.basis::<TorusIndex>()?.into_iter().enumerate() {
                let (op, ker) = (eval.diagonal.get(pos as u64), kernel_diagonal(&a[0], &a[1], &a[2], k));
                entry_gap = entry_gap.max((op - ker).norm());
                op_sum += op;
                ker_sum += ker;
            }
            sum_gap = sum_gap.max((op_sum - ker_sum).norm());
            rows.push(vec![t as f64, shells as f64, op_sum.re, op_sum.im, ker_sum.re, ker_sum.im]);
        }
        if t == 0 {
            for (i, x) in a.iter().enumerate() {
                s.artifact(&format!("inputs/a{i}.series"), &write_series(x))?;
            }
        }
    }
    let tol = p.float("tol_diagonal");
    s.at_most("max |operator - kernel| per diagonal entry", entry_gap, tol);
    s.at_most("max |operator - kernel| of the diagonal sums", sum_gap, tol);
    s.artifact("diagonal_sums.csv", &table_csv(&["poly", "shells", "operator_re", "operator_im", "kernel_re", "kernel_im"], &rows)?)?;
    s.at_most("runtime seconds", start.elapsed().as_secs_f64(), p.float("max_seconds"));
    Ok(())
}

pub(super) const SHELL_PERMUTATION: Experiment = Experiment {
    name: "shell-permutation-stability",
    module: "trace_lab",
    anchor: "Theorem \"adpomopknad\"",
    criterion: None,
    summary: "torus log means under reordering inside Laplacian shells: invariant at shell boundaries, measured elsewhere",
    params: &[
        ParamSpec::new("alpha", Float, "0.5", "Hölder exponent of the axis-lacunary inputs"),
        ParamSpec::new("level", Int, "5", "lacunary level along each axis"),
        ParamSpec::new("shells", Int, "1500", "Laplacian window E_N"),
        ParamSpec::new("m_lo", Int, "4", "first dyadic checkpoint exponent"),
        ParamSpec::new("m_hi", Int, "12", "last dyadic checkpoint exponent"),
        ParamSpec::new("tol_boundary", Float, "1e-9", "tolerance at shell boundaries"),
    ],
    run: run_shells,
};

/// `Σ_j c_j 2^{-jα} (z1^{2^j} + z2^{2^j})`.
fn axis_lacunary(alpha: f64, level: u32, c: impl Fn(u32) -> f64) -> TorusSeries {
    FourierSeries::from_terms((0..=level).flat_map(|j| {
        let w = Complex::new(c(j) * (-alpha * j as f64).exp2(), 0.0);
        let f = 1i64 << j;
        [(TorusIndex::new(f, 0), w), (TorusIndex::new(0, f), w)]
    }))
}

fn run_shells(p: &Params, s: &mut Session) -> Result<()> {
    let alpha = p.float("alpha");
    let level = level_param(p, "level")?;
    let ones = axis_lacunary(alpha, level, |_| 1.0);
    let alt = axis_lacunary(alpha, level, |j| if j % 2 == 0 { 1.0 } else { -1.0 });
    let a = [ones.clone(), alt.conj(), ones];
    let w = TruncationWindow::Shells(p.uint("shells")?);
    let basis: Vec<TorusIndex> = w.basis()?;
    let schedule = Schedule::dyadic(level_param(p, "m_lo")?, level_param(p, "m_hi")?).truncated(basis.len() as u64 - 1);
    let eval = evaluate_on(&Cochain::Cyclic(FredholmModuleSpec::torus(2)?), &a, w, &schedule)?;
    let values: Vec<Complex> = (0..basis.len() as u64).map(|pos| eval.diagonal.get(pos)).collect();

    let mut shell_ranges = Vec::new();
    let mut lo = 0;
    for pos in 1..=basis.len() {
        if pos == basis.len() || basis[pos].norm_sq() != basis[lo].norm_sq() {
            shell_ranges.push(lo..pos);
            lo = pos;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed());
    let mut reversed = values.clone();
    let mut shuffled = values.clone();
    for r in &shell_ranges {
        reversed[r.clone()].reverse();
        shuffled[r.clone()].shuffle(&mut rng);
    }

    let prefix = |v: &[Complex]| -> Vec<Complex> {
        v.iter()
            .scan(Complex::new(0.0, 0.0), |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    };
    let (base, rev, shuf) = (prefix(&values), prefix(&reversed), prefix(&shuffled));
    let boundary_gap = shell_ranges
        .iter()
        .map(|r| r.end - 1)
        .map(|end| (base[end] - rev[end]).norm().max((base[end] - shuf[end]).norm()))
        .fold(0.0, f64::max);
    s.measured("shells in the window", shell_ranges.len());
    s.at_most("max prefix-sum change at shell boundaries", boundary_gap, p.float("tol_boundary"));

    let series = |v: Vec<Complex>| log_mean(&DiagonalSequence::from_values(v, DiagonalOrder::Shells), &schedule);
    let (s0, s1, s2) = (series(values)?, series(reversed)?, series(shuffled)?);
    let drift = |other: &dixlab_core::trace::LogMeanSeries| {
        s0.points().iter().zip(other.points()).map(|(x, y)| (x.value - y.value).norm()).fold(0.0, f64::max)
    };
    s.measured("max log-mean change at dyadic checkpoints (reversed shells)", drift(&s1));
    s.measured("max log-mean change at dyadic checkpoints (shuffled shells)", drift(&s2));
    s.artifact("log_mean.csv", &log_mean_csv(&s0)?)?;
    s.artifact("log_mean_shuffled.csv", &log_mean_csv(&s2)?)?;
    Ok(())
}
