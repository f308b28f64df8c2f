//! `½ c(a_0 ∧ a_1 ∧ a_2 ∧ a_3)` on the circle: the signed permutation sum
//! through operator products, and the double Fourier sum for inputs where
//! `a_0, a_2` extend holomorphically to the disc and `a_1, a_3` to its exterior.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Cochain, FredholmModuleSpec};
use crate::error::{Error, Result};
use crate::op::TruncationWindow;
use crate::seq::{CircleSeries, Complex, Scalar};
use crate::trace::{log_mean, probe, weighted_diagonal, DiagonalOrder, DiagonalSequence, ExtendedLimitProbe, LogMeanSeries, Schedule};

/// Permutations of `1..=k` with their signs, identity first.
pub fn wedge_permutations(k: usize) -> Vec<(i64, Vec<usize>)> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut (1..=k).collect(), &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            (if inversions % 2 == 0 { 1 } else { -1 }, p)
        })
        .collect()
}

/// `d_k = k a0_k Σ_{m>=k} a2_m (a1_{−m} a3_{−k} − a1_{−k} a3_{−m})`, indexed by `k >= 0`.
pub fn wedge_fast_path<S: Scalar>(a: &[CircleSeries<S>], cap: u64) -> Result<DiagonalSequence> {
    check_pattern(a)?;
    let (a0, a1, a2, a3) = (&a[0], &a[1], &a[2], &a[3]);
    let mut entries = BTreeMap::new();
    for (k, c0) in a0.iter() {
        if k < 0 || k as u64 >= cap {
            continue;
        }
        let (a1k, a3k) = (a1.coeff(-k), a3.coeff(-k));
        let mut inner = S::zero();
        for (m, c2) in a2.iter().filter(|(m, _)| *m >= k) {
            inner = inner + c2.clone() * (a1.coeff(-m) * a3k.clone() - a1k.clone() * a3.coeff(-m));
        }
        let v = S::from_i64(k) * c0.clone() * inner;
        if !v.is_zero() {
            entries.insert(k as u64, v.to_complex());
        }
    }
    Ok(DiagonalSequence::from_sparse(entries, cap, DiagonalOrder::Radial))
}

fn check_pattern<S: Scalar>(a: &[CircleSeries<S>]) -> Result<()> {
    if a.len() != 4 {
        return Err(Error::Arity { expected: 4, got: a.len() });
    }
    if !(a[0].is_analytic() && a[2].is_analytic()) {
        return Err(Error::HolomorphyPattern("slots 0 and 2 need nonnegative frequencies"));
    }
    if !(a[1].is_antianalytic() && a[3].is_antianalytic()) {
        return Err(Error::HolomorphyPattern("slots 1 and 3 need nonpositive frequencies"));
    }
    Ok(())
}

/// `½ Σ_σ sign(σ) diag F [F,a_0] [F,a_σ1] ... [F,a_σp]` on `{−radius..radius}`,
/// folded so entry `r` holds `d_r + d_{−r}`.
pub fn wedge_operator_path<S: Scalar>(spec: FredholmModuleSpec, a: &[CircleSeries<S>], radius: u64) -> Result<DiagonalSequence> {
    let cochain = Cochain::Cyclic(spec);
    if a.len() != cochain.arity() {
        return Err(Error::Arity { expected: cochain.arity(), got: a.len() });
    }
    let half = S::from_i64(2).inv().expect("2 is invertible");
    let mut terms = Vec::new();
    for (sign, perm) in wedge_permutations(a.len() - 1) {
        let mut args = alloc::vec![a[0].clone()];
        args.extend(perm.iter().map(|&i| a[i].clone()));
        for (w, r) in cochain.terms(&args)? {
            terms.push((S::from_i64(sign) * half.clone() * w, r));
        }
    }
    let d = weighted_diagonal(&terms, TruncationWindow::Symmetric(radius))?;
    let mut folded: BTreeMap<u64, Complex> = BTreeMap::new();
    for (pos, v) in d.entries {
        *folded.entry(pos.div_ceil(2)).or_insert(Complex::new(0.0, 0.0)) += v.to_complex();
    }
    Ok(DiagonalSequence::from_sparse(folded, radius + 1, DiagonalOrder::Radial))
}

#[derive(Clone, Debug)]
pub struct WedgeEvaluation {
    pub fast: LogMeanSeries,
    pub probe: Option<ExtendedLimitProbe>,
    /// Operator-path log-means at the cross-checked checkpoints.
    pub operator: Option<LogMeanSeries>,
}

/// Fast-path evaluation of `½ c(a_0 ∧ ... ∧ a_3)`. With `cross_check_to`, the
/// operator path is evaluated at every checkpoint `N <= cross_check_to` and a
/// disagreement beyond `tolerance` is an error.
pub fn eval_wedge<S: Scalar>(
    spec: FredholmModuleSpec,
    a: &[CircleSeries<S>],
    schedule: &Schedule,
    cross_check_to: Option<u64>,
    tolerance: f64,
) -> Result<WedgeEvaluation> {
    if spec.p() != 3 || spec.graded() {
        return Err(Error::Invalid("the wedge fast path is for the circle module with p = 3".into()));
    }
    let fast_diag = wedge_fast_path(a, schedule.max_n() + 1)?;
    let fast = log_mean(&fast_diag, schedule)?;
    let probe = if fast.len() >= 3 { Some(probe(&fast)?) } else { None };
    let operator = match cross_check_to {
        None => None,
        Some(limit) => {
            let sub = schedule.truncated(limit);
            let op = log_mean(&wedge_operator_path(spec, a, sub.max_n())?, &sub)?;
            for (f, o) in fast.points().iter().zip(op.points()) {
                if (f.value - o.value).norm() > tolerance {
                    return Err(Error::PathDisagreement { n: o.n, fast: f.value.re, operator: o.value.re });
                }
            }
            Some(op)
        }
    };
    Ok(WedgeEvaluation { fast, probe, operator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::GaussRational as Q;

    #[test]
    fn permutation_signs() {
        let p = wedge_permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], (1, alloc::vec![1, 2, 3]));
        assert_eq!(p.iter().map(|x| x.0).sum::<i64>(), 0);
        assert!(p.contains(&(-1, alloc::vec![2, 1, 3])));
        assert!(p.contains(&(1, alloc::vec![2, 3, 1])));
    }

    #[test]
    fn repeated_slot_cancels_in_fast_path() {
        let a0 = CircleSeries::from_terms([(1, Q::from_ints(1, 0)), (4, Q::from_ints(2, -1))]);
        let a1 = CircleSeries::from_terms([(-2, Q::from_ints(3, 0)), (-1, Q::from_ints(0, 1))]);
        let a2 = CircleSeries::from_terms([(2, Q::from_ints(1, 1)), (8, Q::from_ints(-1, 0))]);
        let d = wedge_fast_path(&[a0, a1.clone(), a2, a1], 64).unwrap();
        assert!((0..64).all(|k| d.get(k) == Complex::new(0.0, 0.0)));
    }

    #[test]
    fn pattern_is_checked() {
        let z = CircleSeries::<Q>::z_pow(1);
        let zi = CircleSeries::<Q>::z_pow(-1);
        assert!(matches!(wedge_fast_path(&[zi.clone(), z.clone(), z.clone(), zi.clone()], 8), Err(Error::HolomorphyPattern(_))));
        assert!(wedge_fast_path(&[z.clone(), zi.clone(), z, zi], 8).is_ok());
    }
}
