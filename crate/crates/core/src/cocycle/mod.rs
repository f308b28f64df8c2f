//! Singular cocycles `c_ω`, `h_ω`, the Connes-Chern cochain, and the
//! identities relating them, evaluated as log-means of exact diagonals.

mod wedge;

pub use wedge::{eval_wedge, wedge_fast_path, wedge_operator_path, wedge_permutations, WedgeEvaluation};

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::op::{Factor, OperatorModel, OperatorRecipe, TruncationWindow};
use crate::seq::{Complex, Domain, FourierSeries, FrequencyIndex, Scalar};
use crate::trace::{
    log_mean, probe, weighted_diagonal, DiagonalSequence, ExactDiagonal, ExtendedLimitProbe, LogMeanSeries, Schedule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A strict `(p+1, ∞)`-summable Fredholm module on the circle (odd) or the
/// torus (even, graded by the off-diagonal block structure of `F`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FredholmModuleSpec {
    model: OperatorModel,
    p: u32,
}

impl FredholmModuleSpec {
    pub fn circle(p: u32) -> Result<Self> {
        if p % 2 == 0 {
            return Err(Error::Parity("the circle module is odd, p must be odd"));
        }
        Ok(Self { model: OperatorModel::CircleF, p })
    }

    pub fn torus(p: u32) -> Result<Self> {
        if p % 2 == 1 {
            return Err(Error::Parity("the torus module is even, p must be even"));
        }
        Ok(Self { model: OperatorModel::TorusF, p })
    }

    pub fn model(&self) -> OperatorModel {
        self.model
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn parity(&self) -> Parity {
        if self.model == OperatorModel::TorusF {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn domain(&self) -> Domain {
        self.model.domain()
    }

    pub fn graded(&self) -> bool {
        self.parity() == Parity::Even
    }

    /// Smallest canonical window whose enumeration reaches position `max_n`.
    pub fn default_window(&self, max_n: u64) -> TruncationWindow {
        match self.domain() {
            Domain::Circle => TruncationWindow::Symmetric(max_n / 2 + 1),
            Domain::Torus => {
                let mut s = 1;
                while TruncationWindow::Shells(s).size() <= max_n {
                    s *= 2;
                }
                let (mut lo, mut hi) = (s / 2, s);
                while lo + 1 < hi {
                    let mid = (lo + hi) / 2;
                    if TruncationWindow::Shells(mid).size() > max_n {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                TruncationWindow::Shells(hi)
            }
        }
    }
}

/// A multilinear functional realized as a weighted sum of operator products
/// whose (super)traces are taken.
#[derive(Clone, Debug, PartialEq)]
pub enum Cochain {
    /// `c(a_0..a_p) = STr(F [F,a_0] ... [F,a_p])`.
    Cyclic(FredholmModuleSpec),
    /// `h(a_0..a_{p+1}) = p STr(F a_0 [F,a_1] ... [F,a_{p+1}])`.
    Hochschild(FredholmModuleSpec),
    /// Hochschild coboundary `bφ`.
    Coboundary(Box<Cochain>),
    /// `φ(a_0..a_n) − (−1)^n φ(a_1..a_n, a_0)`.
    CyclicityDefect(Box<Cochain>),
    /// `(num/den) φ`.
    Scaled { num: i64, den: i64, inner: Box<Cochain> },
}

impl Cochain {
    /// The circle 1-cocycle with the pairing constant `1/4`.
    pub fn circle_pairing() -> Self {
        Cochain::Cyclic(FredholmModuleSpec { model: OperatorModel::CircleF, p: 1 }).scaled(1, 4)
    }

    pub fn coboundary(self) -> Self {
        Cochain::Coboundary(Box::new(self))
    }

    pub fn cyclicity_defect(self) -> Self {
        Cochain::CyclicityDefect(Box::new(self))
    }

    pub fn scaled(self, num: i64, den: i64) -> Self {
        Cochain::Scaled { num, den, inner: Box::new(self) }
    }

    pub fn spec(&self) -> FredholmModuleSpec {
        match self {
            Cochain::Cyclic(s) | Cochain::Hochschild(s) => *s,
            Cochain::Coboundary(c) | Cochain::CyclicityDefect(c) | Cochain::Scaled { inner: c, .. } => c.spec(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Cochain::Cyclic(s) => s.p as usize + 1,
            Cochain::Hochschild(s) => s.p as usize + 2,
            Cochain::Coboundary(c) => c.arity() + 1,
            Cochain::CyclicityDefect(c) | Cochain::Scaled { inner: c, .. } => c.arity(),
        }
    }

    /// Weighted operator products whose trace sum is `φ(a)`.
    pub fn terms<I: FrequencyIndex, S: Scalar>(&self, a: &[FourierSeries<I, S>]) -> Result<Vec<(S, OperatorRecipe<I, S>)>> {
        if a.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), got: a.len() });
        }
        if I::DOMAIN != self.spec().domain() {
            return Err(Error::Domain("cochain inputs and Fredholm module"));
        }
        match self {
            Cochain::Cyclic(s) => Ok(graded_products(s, None, &a.iter().collect::<Vec<_>>(), S::one())),
            Cochain::Hochschild(s) => {
                let rest: Vec<&FourierSeries<I, S>> = a[1..].iter().collect();
                Ok(graded_products(s, Some(&a[0]), &rest, S::from_i64(s.p as i64)))
            }
            Cochain::Coboundary(inner) => {
                let n = inner.arity();
                let mut out = Vec::new();
                for i in 0..n {
                    let mut args: Vec<FourierSeries<I, S>> = a[..i].to_vec();
                    args.push(a[i].multiply(&a[i + 1]));
                    args.extend_from_slice(&a[i + 2..]);
                    out.extend(signed(inner.terms(&args)?, i % 2 == 1));
                }
                let mut args = vec![a[n].multiply(&a[0])];
                args.extend_from_slice(&a[1..n]);
                out.extend(signed(inner.terms(&args)?, n % 2 == 1));
                Ok(out)
            }
            Cochain::CyclicityDefect(inner) => {
                let n = a.len() - 1;
                let mut rotated: Vec<FourierSeries<I, S>> = a[1..].to_vec();
                rotated.push(a[0].clone());
                let mut out = inner.terms(a)?;
                out.extend(signed(inner.terms(&rotated)?, n % 2 == 0));
                Ok(out)
            }
            Cochain::Scaled { num, den, inner } => {
                let f = S::from_i64(*num) * S::from_i64(*den).inv().ok_or(Error::Invalid("zero denominator".into()))?;
                Ok(inner.terms(a)?.into_iter().map(|(w, r)| (f.clone() * w, r)).collect())
            }
        }
    }
}

fn signed<I: FrequencyIndex, S: Scalar>(terms: Vec<(S, OperatorRecipe<I, S>)>, negate: bool) -> Vec<(S, OperatorRecipe<I, S>)> {
    if negate {
        terms.into_iter().map(|(w, r)| (-w, r)).collect()
    } else {
        terms
    }
}

/// `F (a_lead) [F,b_0] [F,b_1] ...` as traced products. On the torus,
/// `F = [[0,U],[U*,0]]` and the supertrace is the top-left block diagonal
/// minus the bottom-right one; each block alternates `U` and `U*`.
fn graded_products<I: FrequencyIndex, S: Scalar>(
    spec: &FredholmModuleSpec,
    lead: Option<&FourierSeries<I, S>>,
    comms: &[&FourierSeries<I, S>],
    weight: S,
) -> Vec<(S, OperatorRecipe<I, S>)> {
    let build = |first: OperatorModel| {
        let second = first.adjoint();
        let mut f = vec![Factor::Phase(first)];
        if let Some(a) = lead {
            f.push(Factor::Multiply(a.clone()));
        }
        for (i, b) in comms.iter().enumerate() {
            let m = if i % 2 == 0 { second } else { first };
            f.push(Factor::Commutator(m, (*b).clone()));
        }
        OperatorRecipe::new(f)
    };
    if spec.graded() {
        vec![(weight.clone(), build(OperatorModel::TorusU)), (-weight, build(OperatorModel::TorusUAdjoint))]
    } else {
        vec![(weight, build(spec.model))]
    }
}

/// A cochain evaluated on inputs: exact diagonal, log-means and probe.
#[derive(Clone, Debug)]
pub struct CochainEvaluation<S: Scalar> {
    pub cochain: Cochain,
    pub window: TruncationWindow,
    pub exact_diagonal: ExactDiagonal<S>,
    pub diagonal: DiagonalSequence,
    pub series: LogMeanSeries,
    /// Absent when the schedule has fewer than three checkpoints.
    pub probe: Option<ExtendedLimitProbe>,
    /// Full trace, present when the product is finite rank inside the window.
    pub exact: Option<S>,
}

impl<S: Scalar> CochainEvaluation<S> {
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

pub fn evaluate<I: FrequencyIndex, S: Scalar>(
    cochain: &Cochain,
    a: &[FourierSeries<I, S>],
    schedule: &Schedule,
) -> Result<CochainEvaluation<S>> {
    let w = cochain.spec().default_window(schedule.max_n());
    evaluate_on(cochain, a, w, schedule)
}

pub fn evaluate_on<I: FrequencyIndex, S: Scalar>(
    cochain: &Cochain,
    a: &[FourierSeries<I, S>],
    window: TruncationWindow,
    schedule: &Schedule,
) -> Result<CochainEvaluation<S>> {
    let terms = cochain.terms(a)?;
    let exact_diagonal = weighted_diagonal(&terms, window)?;
    let diagonal = exact_diagonal.to_sequence();
    let series = log_mean(&diagonal, schedule)?;
    let probe = if series.len() >= 3 { Some(probe(&series)?) } else { None };
    let exact = exact_diagonal.complete.then(|| exact_diagonal.total());
    Ok(CochainEvaluation { cochain: cochain.clone(), window, exact_diagonal, diagonal, series, probe, exact })
}

pub fn eval_c_omega<I: FrequencyIndex, S: Scalar>(
    spec: FredholmModuleSpec,
    a: &[FourierSeries<I, S>],
    schedule: &Schedule,
) -> Result<CochainEvaluation<S>> {
    evaluate(&Cochain::Cyclic(spec), a, schedule)
}

pub fn eval_h_omega<I: FrequencyIndex, S: Scalar>(
    spec: FredholmModuleSpec,
    a: &[FourierSeries<I, S>],
    schedule: &Schedule,
) -> Result<CochainEvaluation<S>> {
    evaluate(&Cochain::Hochschild(spec), a, schedule)
}

/// `(b h)(a_0..a_{p+2})`; its singular trace vanishes.
pub fn check_hochschild_cocycle<I: FrequencyIndex, S: Scalar>(
    spec: FredholmModuleSpec,
    a: &[FourierSeries<I, S>],
    schedule: &Schedule,
) -> Result<CochainEvaluation<S>> {
    evaluate(&Cochain::Hochschild(spec).coboundary(), a, schedule)
}

/// `c(a) − (−1)^p c(a_1..a_p, a_0)`.
pub fn check_cyclicity<I: FrequencyIndex, S: Scalar>(
    spec: FredholmModuleSpec,
    a: &[FourierSeries<I, S>],
    schedule: &Schedule,
) -> Result<CochainEvaluation<S>> {
    evaluate(&Cochain::Cyclic(spec).cyclicity_defect(), a, schedule)
}

/// `c_n = (−1)^{n(n−1)/2} Γ(n/2 + 1)`, times `√(2i) = 1 + i` for odd `n`.
pub fn connes_chern_constant(n: u32) -> Complex {
    // Γ(n/2 + 1) by the recursion Γ(x + 1) = x Γ(x) from Γ(1) = 1 or Γ(1/2) = √π
    let mut x = if n % 2 == 0 { 1.0 } else { 0.5 };
    let mut gamma = if n % 2 == 0 { 1.0 } else { core::f64::consts::PI.sqrt() };
    while x < n as f64 / 2.0 + 1.0 - 1e-9 {
        gamma *= x;
        x += 1.0;
    }
    let sign = if (n as u64 * (n as u64).saturating_sub(1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let c = Complex::new(sign * gamma, 0.0);
    if n % 2 == 1 {
        c * Complex::new(1.0, 1.0)
    } else {
        c
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChernEvaluation<S: Scalar> {
    pub n: u32,
    /// Trace of `F [F,a_0] ... [F,a_n]` on the base window.
    pub raw: S,
    pub constant: Complex,
    pub value: Complex,
    pub window: TruncationWindow,
    /// `|trace(2W) − trace(W)|`.
    pub drift: f64,
}

/// `c_n STr(F [F,a_0] ... [F,a_n])` on a window past the degree sum, with a
/// window-doubling stability check.
pub fn eval_ch_cc<I: FrequencyIndex, S: Scalar>(
    spec: FredholmModuleSpec,
    a: &[FourierSeries<I, S>],
    tolerance: f64,
) -> Result<ChernEvaluation<S>> {
    if a.is_empty() {
        return Err(Error::Empty("ch_CC inputs"));
    }
    let n = a.len() as u32 - 1;
    let odd = n % 2 == 1;
    if odd != (spec.parity() == Parity::Odd) {
        return Err(Error::Parity("ch_CC degree must match the module parity"));
    }
    let module = FredholmModuleSpec { model: spec.model, p: n };
    let terms = Cochain::Cyclic(module).terms(a)?;
    let degree: u64 = a.iter().map(|s| s.max_frequency()).sum::<u64>().max(1);
    let (base, doubled) = match spec.domain() {
        Domain::Circle => (TruncationWindow::Symmetric(degree), TruncationWindow::Symmetric(2 * degree)),
        Domain::Torus => (TruncationWindow::Disc(degree * degree), TruncationWindow::Disc(4 * degree * degree)),
    };
    let raw = weighted_diagonal(&terms, base)?.total();
    let big = weighted_diagonal(&terms, doubled)?.total();
    let drift = (big.to_complex() - raw.to_complex()).norm();
    if drift > tolerance {
        return Err(Error::Drift { drift });
    }
    let constant = connes_chern_constant(n);
    Ok(ChernEvaluation { n, value: constant * raw.to_complex(), raw, constant, window: base, drift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{CircleSeries, GaussRational as Q};

    fn z(k: i64) -> CircleSeries<Q> {
        CircleSeries::z_pow(k)
    }

    fn short() -> Schedule {
        Schedule::dyadic(2, 8)
    }

    #[test]
    fn parity_is_enforced() {
        assert!(FredholmModuleSpec::circle(2).is_err());
        assert!(FredholmModuleSpec::torus(1).is_err());
        assert_eq!(FredholmModuleSpec::torus(2).unwrap().parity(), Parity::Even);
    }

    #[test]
    fn winding_pairing_is_exact() {
        let spec = FredholmModuleSpec::circle(1).unwrap();
        let e = eval_c_omega(spec, &[z(1), z(-1)], &short()).unwrap();
        assert_eq!(e.exact, Some(Q::from_i64(-4)));
        let paired = evaluate(&Cochain::circle_pairing(), &[z(1), z(-1)], &short()).unwrap();
        assert_eq!(paired.exact, Some(Q::from_i64(-1)));
    }

    #[test]
    fn arity_is_checked() {
        let spec = FredholmModuleSpec::circle(1).unwrap();
        assert_eq!(eval_c_omega(spec, &[z(1)], &short()).unwrap_err(), Error::Arity { expected: 2, got: 1 });
    }

    #[test]
    fn hochschild_with_unit_lead() {
        let spec = FredholmModuleSpec::circle(1).unwrap();
        let h = eval_h_omega(spec, &[Q::one_series(), z(1), z(-1)], &short()).unwrap();
        let c = eval_c_omega(spec, &[z(1), z(-1)], &short()).unwrap();
        assert_eq!(h.exact, Some(Q::from_i64(-4)));
        assert_eq!(h.exact_diagonal.entries, c.exact_diagonal.entries);
    }

    #[test]
    fn cyclicity_on_winding_pair() {
        let spec = FredholmModuleSpec::circle(1).unwrap();
        let e = check_cyclicity(spec, &[z(1), z(-1)], &short()).unwrap();
        assert_eq!(e.exact, Some(Q::zero()));
        assert!(e.series.points().iter().all(|p| p.value == Complex::new(0.0, 0.0)));
    }

    #[test]
    fn coboundary_collapses_on_unit_next_to_inverse() {
        // b h (z, 1, z^-1, w): the direct expansion, term by term
        let spec = FredholmModuleSpec::circle(1).unwrap();
        let a = [z(1), Q::one_series(), z(-1), z(2)];
        let b = check_hochschild_cocycle(spec, &a, &short()).unwrap();
        let h = |x: &[CircleSeries<Q>]| eval_h_omega(spec, x, &short()).unwrap().exact.unwrap();
        let direct = h(&[z(1), z(-1), z(2)]) - h(&[z(1), z(-1), z(2)]) + h(&[z(1), Q::one_series(), z(1)])
            - h(&[z(3), Q::one_series(), z(-1)]);
        assert_eq!(b.exact.unwrap(), direct);
        // [F,1] = 0 kills the last two terms, the first two cancel
        assert_eq!(direct, Q::zero());
    }

    #[test]
    fn chern_constants() {
        let c1 = connes_chern_constant(1);
        let half_sqrt_pi = core::f64::consts::PI.sqrt() / 2.0;
        assert!((c1 - Complex::new(half_sqrt_pi, half_sqrt_pi)).norm() < 1e-15);
        assert_eq!(connes_chern_constant(2), Complex::new(-1.0, 0.0));
        assert_eq!(connes_chern_constant(0), Complex::new(1.0, 0.0));
        // n = 3: (−1)^3 Γ(5/2) = −(3/4)√π
        let c3 = connes_chern_constant(3);
        assert!((c3 - Complex::new(-0.75, -0.75) * core::f64::consts::PI.sqrt()).norm() < 1e-14);
    }

    #[test]
    fn chern_character_on_winding_pair() {
        let spec = FredholmModuleSpec::circle(1).unwrap();
        let ch = eval_ch_cc(spec, &[z(1), z(-1)], 1e-10).unwrap();
        assert_eq!(ch.raw, Q::from_i64(-4));
        assert_eq!(ch.drift, 0.0);
        let zero = eval_ch_cc(spec, &[Q::one_series(), z(1)], 1e-10).unwrap();
        assert_eq!(zero.raw, Q::zero());
        assert!(eval_ch_cc(spec, &[z(1), z(-1), z(1)], 1e-10).is_err());
    }

    #[test]
    fn torus_supertrace_matches_kernel() {
        use crate::op::kernel_diagonal;
        use crate::seq::TorusIndex;
        let t = |a: i64, b: i64| TorusIndex::new(a, b);
        let mk = |terms: &[(i64, i64, f64, f64)]| {
            FourierSeries::from_terms(terms.iter().map(|&(a, b, re, im)| (t(a, b), Complex::new(re, im))))
        };
        let a0 = mk(&[(1, 0, 1.0, 0.0), (0, -2, 0.5, -0.25)]);
        let a1 = mk(&[(-1, 1, 0.3, 0.7), (2, 0, -1.0, 0.0)]);
        let a2 = mk(&[(0, 1, 1.0, 0.5), (-1, -1, 0.2, 0.0)]);
        let spec = FredholmModuleSpec::torus(2).unwrap();
        let w = TruncationWindow::Shells(12);
        let e = evaluate_on(&Cochain::Cyclic(spec), &[a0.clone(), a1.clone(), a2.clone()], w, &Schedule::dyadic(2, 5)).unwrap();
        let basis: Vec<TorusIndex> = w.basis().unwrap();
        for (pos, k) in basis.iter().enumerate() {
            let kernel = kernel_diagonal(&a0, &a1, &a2, *k);
            assert!((e.diagonal.get(pos as u64) - kernel).norm() < 1e-12, "k={k:?}");
        }
    }

    trait OneSeries {
        fn one_series() -> CircleSeries<Q>;
    }
    impl OneSeries for Q {
        fn one_series() -> CircleSeries<Q> {
            CircleSeries::one()
        }
    }
}
