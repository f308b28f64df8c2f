//! Logarithmic means of diagonal sequences, the computable stand-in for
//! Dixmier traces, and tail statistics over dyadic checkpoints.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::op::{OperatorRecipe, SparseOperator, TruncationWindow};
use crate::seq::lacunary::lacunary_weights;
use crate::seq::{BoundedSequence, Complex, FrequencyIndex, HolderExponent, Scalar};

/// How the indices of a diagonal sequence were enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagonalOrder {
    /// Circle, `k = 0, 1, 2, ...`.
    OneSided,
    /// Circle, `0, -1, 1, -2, 2, ...`.
    Symmetric,
    /// Torus shells by `|k|²`, ties lexicographic.
    Shells,
    /// Circle, entry `r` holds `d_r + d_{-r}` (frequency radius).
    Radial,
    /// Closed-form rule indexed directly by `k`.
    Rule,
}

type RuleFn = dyn Fn(u64) -> Complex + Send + Sync;

#[derive(Clone)]
enum Source {
    Dense(Vec<Complex>),
    Sparse(BTreeMap<u64, Complex>),
    Rule(Arc<RuleFn>),
    Sum(Vec<(Complex, DiagonalSequence)>),
}

/// `k ↦ d_k` for `k < cap`.
#[derive(Clone)]
pub struct DiagonalSequence {
    source: Source,
    cap: u64,
    order: DiagonalOrder,
}

impl fmt::Debug for DiagonalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::Dense(_) => "dense",
            Source::Sparse(_) => "sparse",
            Source::Rule(_) => "rule",
            Source::Sum(_) => "sum",
        };
        f.debug_struct("DiagonalSequence").field("source", &kind).field("cap", &self.cap).field("order", &self.order).finish()
    }
}

impl DiagonalSequence {
    pub fn from_values(values: Vec<Complex>, order: DiagonalOrder) -> Self {
        let cap = values.len() as u64;
        Self { source: Source::Dense(values), cap, order }
    }

    /// Entries not listed are zero.
    pub fn from_sparse(entries: BTreeMap<u64, Complex>, cap: u64, order: DiagonalOrder) -> Self {
        let entries = entries.into_iter().filter(|(k, v)| *k < cap && *v != Complex::new(0.0, 0.0)).collect();
        Self { source: Source::Sparse(entries), cap, order }
    }

    pub fn from_rule<F>(cap: u64, f: F) -> Self
    where
        F: Fn(u64) -> Complex + Send + Sync + 'static,
    {
        Self { source: Source::Rule(Arc::new(f)), cap, order: DiagonalOrder::Rule }
    }

    pub fn constant(cap: u64, c: Complex) -> Self {
        Self::from_rule(cap, move |_| c)
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn order(&self) -> DiagonalOrder {
        self.order
    }

    pub fn get(&self, k: u64) -> Complex {
        let zero = Complex::new(0.0, 0.0);
        if k >= self.cap {
            return zero;
        }
        match &self.source {
            Source::Dense(v) => v[k as usize],
            Source::Sparse(m) => m.get(&k).copied().unwrap_or(zero),
            Source::Rule(f) => f(k),
            Source::Sum(parts) => parts.iter().map(|(c, d)| *c * d.get(k)).sum(),
        }
    }

    /// `Σ c_i d_i`, capped at the smallest cap.
    pub fn linear_combination(parts: Vec<(Complex, DiagonalSequence)>) -> Result<Self> {
        let first = parts.first().ok_or(Error::Empty("linear combination"))?;
        let order = first.1.order;
        let cap = parts.iter().map(|p| p.1.cap).min().unwrap_or(0);
        // Sparse parts combine into a sparse result, which keeps prefix sums cheap.
        if parts.iter().all(|p| matches!(p.1.source, Source::Sparse(_))) {
            let mut acc: BTreeMap<u64, Complex> = BTreeMap::new();
            for (c, d) in &parts {
                if let Source::Sparse(m) = &d.source {
                    for (k, v) in m {
                        *acc.entry(*k).or_insert(Complex::new(0.0, 0.0)) += *c * *v;
                    }
                }
            }
            return Ok(Self::from_sparse(acc, cap, order));
        }
        Ok(Self { source: Source::Sum(parts), cap, order })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let one = Complex::new(1.0, 0.0);
        Self::linear_combination(alloc::vec![(one, self.clone()), (one, other.clone())])
    }

    pub fn scale(&self, c: Complex) -> Self {
        match &self.source {
            Source::Dense(v) => Self::from_values(v.iter().map(|x| *x * c).collect(), self.order),
            Source::Sparse(m) => Self::from_sparse(m.iter().map(|(k, v)| (*k, *v * c)).collect(), self.cap, self.order),
            _ => Self { source: Source::Sum(alloc::vec![(c, self.clone())]), cap: self.cap, order: self.order },
        }
    }

    /// Materialized prefix `d_0 .. d_{len-1}`.
    pub fn prefix(&self, len: u64) -> Vec<Complex> {
        (0..len.min(self.cap)).map(|k| self.get(k)).collect()
    }

    /// Compensated prefix sums `Σ_{k<=N} d_k` at increasing `N`.
    fn prefix_sums(&self, ns: &[u64]) -> Vec<Complex> {
        let mut re = Neumaier::default();
        let mut im = Neumaier::default();
        let mut out = Vec::with_capacity(ns.len());
        match &self.source {
            Source::Sparse(m) => {
                let mut it = m.iter().peekable();
                for &n in ns {
                    while let Some((k, v)) = it.peek() {
                        if **k > n {
                            break;
                        }
                        re.add(v.re);
                        im.add(v.im);
                        it.next();
                    }
                    out.push(Complex::new(re.total(), im.total()));
                }
            }
            _ => {
                let mut next = 0u64;
                for &n in ns {
                    while next <= n {
                        let v = self.get(next);
                        re.add(v.re);
                        im.add(v.im);
                        next += 1;
                    }
                    out.push(Complex::new(re.total(), im.total()));
                }
            }
        }
        out
    }
}

/// Kahan-Babuška-Neumaier summation.
#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }
    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

fn window_order(w: &TruncationWindow) -> DiagonalOrder {
    match w {
        TruncationWindow::OneSided(_) => DiagonalOrder::OneSided,
        TruncationWindow::Symmetric(_) | TruncationWindow::Band { .. } => DiagonalOrder::Symmetric,
        TruncationWindow::Shells(_) | TruncationWindow::Disc(_) => DiagonalOrder::Shells,
    }
}

/// Exact diagonal entries keyed by position in the window's canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDiagonal<S: Scalar> {
    pub entries: BTreeMap<u64, S>,
    pub cap: u64,
    pub order: DiagonalOrder,
    /// Every nonzero diagonal entry of the infinite operator lies in the window.
    pub complete: bool,
}

impl<S: Scalar> ExactDiagonal<S> {
    pub fn to_sequence(&self) -> DiagonalSequence {
        DiagonalSequence::from_sparse(
            self.entries.iter().map(|(k, v)| (*k, v.to_complex())).collect(),
            self.cap,
            self.order,
        )
    }

    /// Sum of all entries in the window.
    pub fn total(&self) -> S {
        self.entries.values().fold(S::zero(), |acc, v| acc + v.clone())
    }
}

/// `Σ_t w_t <e_k, A_t e_k>` along the window's canonical order, summed exactly.
///
/// Circle products ending in a commutator are evaluated only where the
/// diagonal can be nonzero, so very large windows stay cheap.
pub fn weighted_diagonal<I: FrequencyIndex, S: Scalar>(
    terms: &[(S, OperatorRecipe<I, S>)],
    w: TruncationWindow,
) -> Result<ExactDiagonal<S>> {
    let order = window_order(&w);
    let radius = terms.iter().try_fold(0u64, |acc, (_, r)| r.circle_diagonal_radius().map(|x| acc.max(x)));
    let (positions, ks, complete): (Vec<u64>, Vec<I>, bool) = match (radius, w) {
        (Some(r), TruncationWindow::Symmetric(n)) => {
            let (pos, ks) = (-(r.min(n) as i64)..=r.min(n) as i64)
                .map(|k| (symmetric_position(k), I::from_coords([k, 0])))
                .unzip();
            (pos, ks, r <= n)
        }
        (Some(r), TruncationWindow::OneSided(n)) => {
            let (pos, ks) = (0..=r.min(n)).map(|k| (k, I::from_coords([k as i64, 0]))).unzip();
            (pos, ks, false)
        }
        _ => {
            let (pos, ks) = w.basis::<I>()?.into_iter().enumerate().map(|(p, k)| (p as u64, k)).unzip();
            (pos, ks, false)
        }
    };
    let mut sums = alloc::vec![S::zero(); ks.len()];
    for (weight, recipe) in terms {
        if weight.is_zero() {
            continue;
        }
        for (acc, v) in sums.iter_mut().zip(recipe.diagonal_entries(&ks)?) {
            if !v.is_zero() {
                *acc = acc.clone() + weight.clone() * v;
            }
        }
    }
    let entries = positions.into_iter().zip(sums).filter(|(_, v)| !v.is_zero()).collect();
    Ok(ExactDiagonal { entries, cap: w.size(), order, complete })
}

/// `d_k = <e_k, A e_k>` along the window's canonical order.
pub fn diagonal_of_recipe<I: FrequencyIndex, S: Scalar>(
    recipe: &OperatorRecipe<I, S>,
    w: TruncationWindow,
) -> Result<DiagonalSequence> {
    Ok(weighted_diagonal(&[(S::one(), recipe.clone())], w)?.to_sequence())
}

/// Supertrace diagonal `<e_k, A_even e_k> − <e_k, A_odd e_k>`.
pub fn diagonal_of_graded<I: FrequencyIndex, S: Scalar>(
    even: &OperatorRecipe<I, S>,
    odd: &OperatorRecipe<I, S>,
    w: TruncationWindow,
) -> Result<DiagonalSequence> {
    let one = S::one();
    Ok(weighted_diagonal(&[(one.clone(), even.clone()), (S::zero() - one, odd.clone())], w)?.to_sequence())
}

pub(crate) fn symmetric_position(k: i64) -> u64 {
    if k > 0 {
        2 * k as u64
    } else {
        2 * k.unsigned_abs() - (k != 0) as u64
    }
}

/// Diagonal of an already assembled compressed operator; refuses leaky products.
pub fn diagonal_of_operator<I: FrequencyIndex, S: Scalar>(op: &SparseOperator<I, S>) -> Result<DiagonalSequence> {
    let d = op.diagonal()?;
    Ok(DiagonalSequence::from_values(d.iter().map(Scalar::to_complex).collect(), window_order(&op.window())))
}

/// Closed form of the diagonal of `P W_α(c1) (1−P) W_α(c2)* P` on `k >= 0`:
/// `d_k = Σ_{j <= level, 2^j > k} c1_j conj(c2_j) 2^{-2αj}`.
pub fn szego_product_diagonal(
    c1: &BoundedSequence,
    c2: &BoundedSequence,
    alpha: HolderExponent,
    level: u32,
    cap: u64,
) -> Result<DiagonalSequence> {
    let w1 = lacunary_weights(c1, alpha, level)?;
    let w2 = lacunary_weights(c2, alpha, level)?;
    // tail[b] = Σ_{j >= b} w1_j conj(w2_j)
    let mut tail = alloc::vec![Complex::new(0.0, 0.0); level as usize + 2];
    for j in (0..=level as usize).rev() {
        tail[j] = tail[j + 1] + w1[j] * w2[j].conj();
    }
    Ok(DiagonalSequence {
        source: Source::Rule(Arc::new(move |k| {
            let b = (64 - k.leading_zeros()) as usize;
            tail.get(b).copied().unwrap_or(Complex::new(0.0, 0.0))
        })),
        cap,
        order: DiagonalOrder::OneSided,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    /// Dyadic exponent when `n = 2^m`.
    pub m: Option<u32>,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule(Vec<Checkpoint>);

impl Schedule {
    /// `N = 2^m` for `m = lo..=hi`.
    pub fn dyadic(lo: u32, hi: u32) -> Self {
        Self((lo..=hi).map(|m| Checkpoint { m: Some(m), n: 1u64 << m }).collect())
    }

    /// `N = step, 2 step, ..., count · step`.
    pub fn uniform(step: u64, count: u64) -> Self {
        Self((1..=count).map(|i| Checkpoint { m: None, n: i * step }).collect())
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.0
    }

    pub fn max_n(&self) -> u64 {
        self.0.iter().map(|c| c.n).max().unwrap_or(0)
    }

    /// Keeps checkpoints with `N <= n`.
    pub fn truncated(&self, n: u64) -> Self {
        Self(self.0.iter().copied().filter(|c| c.n <= n).collect())
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Self::dyadic(4, 24)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMeanPoint {
    pub m: Option<u32>,
    pub n: u64,
    pub prefix: Complex,
    pub value: Complex,
}

/// Checkpoint values `(1/log(2+N)) Σ_{k=0}^{N} d_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogMeanSeries {
    points: Vec<LogMeanPoint>,
}

impl LogMeanSeries {
    pub const NORMALIZATION: &'static str = "(1/log(2+N)) * sum_{k=0}^{N} d_k";

    pub fn points(&self) -> &[LogMeanPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&LogMeanPoint> {
        self.points.last()
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            points: self.points.iter().map(|p| LogMeanPoint { prefix: p.prefix * c, value: p.value * c, ..*p }).collect(),
        }
    }

    /// Checkpointwise difference; both series must share a schedule.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.points.len() != other.points.len() || self.points.iter().zip(&other.points).any(|(a, b)| a.n != b.n) {
            return Err(Error::Invalid("log-mean series on different schedules".into()));
        }
        Ok(Self {
            points: self
                .points
                .iter()
                .zip(&other.points)
                .map(|(a, b)| LogMeanPoint { prefix: a.prefix - b.prefix, value: a.value - b.value, ..*a })
                .collect(),
        })
    }

    /// Keeps checkpoints with `N <= n`.
    pub fn truncated(&self, n: u64) -> Self {
        Self { points: self.points.iter().copied().filter(|p| p.n <= n).collect() }
    }
}

pub fn log_mean(d: &DiagonalSequence, schedule: &Schedule) -> Result<LogMeanSeries> {
    let ns: Vec<u64> = schedule.checkpoints().iter().map(|c| c.n).collect();
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("checkpoints must increase".into()));
    }
    if let Some(&n) = ns.last() {
        if n >= d.cap() {
            return Err(Error::BeyondCap { checkpoint: n, cap: d.cap() });
        }
    }
    let sums = d.prefix_sums(&ns);
    let points = schedule
        .checkpoints()
        .iter()
        .zip(sums)
        .map(|(c, s)| LogMeanPoint { m: c.m, n: c.n, prefix: s, value: s / (2.0 + c.n as f64).ln() })
        .collect();
    Ok(LogMeanSeries { points })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// Tail statistics of one real component of a log-mean series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedLimitProbe {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub last: f64,
    /// Intercept of the least-squares fit `value ≈ extrap + slope/m`.
    pub extrap: f64,
    pub residual: f64,
    pub oscillating: bool,
    pub tail: usize,
}

impl ExtendedLimitProbe {
    pub const OSCILLATION_TOLERANCE: f64 = 0.05;
    pub const DEFAULT_TAIL: usize = 6;

    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

pub fn probe(series: &LogMeanSeries) -> Result<ExtendedLimitProbe> {
    probe_with(series, Part::Re, ExtendedLimitProbe::DEFAULT_TAIL)
}

pub fn probe_with(series: &LogMeanSeries, part: Part, tail: usize) -> Result<ExtendedLimitProbe> {
    let pts = series.points();
    if pts.len() < 3 {
        return Err(Error::TooFewCheckpoints { need: 3, have: pts.len() });
    }
    let tail = tail.clamp(2, pts.len());
    let window = &pts[pts.len() - tail..];
    let pick = |p: &LogMeanPoint| match part {
        Part::Re => p.value.re,
        Part::Im => p.value.im,
    };
    let vals: Vec<f64> = window.iter().map(pick).collect();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let last = *vals.last().expect("tail is nonempty");
    let inv_m: Vec<f64> = window
        .iter()
        .map(|p| 1.0 / p.m.map(f64::from).unwrap_or_else(|| (p.n.max(2) as f64).log2()))
        .collect();
    let (extrap, residual) = match linear_fit(&inv_m, &vals) {
        Some(f) => (f.intercept, f.residual),
        None => (mean, 0.0),
    };
    let oscillating = (max - min) / mean.abs().max(1e-12) > ExtendedLimitProbe::OSCILLATION_TOLERANCE;
    Ok(ExtendedLimitProbe { min, max, mean, last, extrap, residual, oscillating, tail })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn identity_and_zero() {
        let one = DiagonalSequence::constant(1 << 10, c(1.0));
        let lm = log_mean(&one, &Schedule::dyadic(2, 9)).unwrap();
        for p in lm.points() {
            assert_eq!(p.prefix, c((p.n + 1) as f64));
            assert!((p.value.re - (p.n + 1) as f64 / (2.0 + p.n as f64).ln()).abs() < 1e-12);
        }
        let zero = DiagonalSequence::constant(1 << 10, c(0.0));
        assert!(log_mean(&zero, &Schedule::dyadic(2, 9)).unwrap().points().iter().all(|p| p.value == c(0.0)));
    }

    #[test]
    fn harmonic_at_two_to_twenty() {
        let h = DiagonalSequence::from_rule(1 << 21, |k| c(1.0 / (k + 1) as f64));
        let lm = log_mean(&h, &Schedule::dyadic(20, 20)).unwrap();
        assert!((lm.points()[0].value.re - 1.0).abs() <= 0.05);
    }

    #[test]
    fn beyond_cap_is_rejected() {
        let d = DiagonalSequence::constant(16, c(1.0));
        assert_eq!(log_mean(&d, &Schedule::dyadic(2, 4)), Err(Error::BeyondCap { checkpoint: 16, cap: 16 }));
    }

    #[test]
    fn constant_series_probe() {
        let pts = (4..10).map(|m| LogMeanPoint { m: Some(m), n: 1 << m, prefix: c(0.0), value: c(2.5) }).collect();
        let p = probe(&LogMeanSeries { points: pts }).unwrap();
        assert_eq!((p.min, p.max, p.mean, p.last), (2.5, 2.5, 2.5, 2.5));
        assert!(!p.oscillating);
        assert!((p.extrap - 2.5).abs() < 1e-12);
    }

    #[test]
    fn probe_needs_three_points() {
        let pts = (4..6).map(|m| LogMeanPoint { m: Some(m), n: 1 << m, prefix: c(0.0), value: c(1.0) }).collect();
        assert!(matches!(probe(&LogMeanSeries { points: pts }), Err(Error::TooFewCheckpoints { .. })));
    }

    #[test]
    fn symmetric_positions() {
        let w = TruncationWindow::Symmetric(3);
        let b: Vec<i64> = w.basis().unwrap();
        for (p, k) in b.iter().enumerate() {
            assert_eq!(symmetric_position(*k), p as u64);
        }
    }

    #[test]
    fn szego_closed_form_prefix() {
        let half = HolderExponent::new(0.5).unwrap();
        let ones = BoundedSequence::ones();
        let d = szego_product_diagonal(&ones, &ones, half, 40, 1 << 25).unwrap();
        assert!((d.get(0).re - 2.0 * (1.0 - 2f64.powi(-41))).abs() < 1e-15);
        assert!((d.get(5).re - 2.0 * 2f64.powi(-3) * (1.0 - 2f64.powi(-38))).abs() < 1e-15);
        let lm = log_mean(&d, &Schedule::dyadic(4, 12)).unwrap();
        for p in lm.points() {
            let m = p.m.unwrap() as i32;
            // Σ_{k<=2^m} d_k = m + 2 - 2^{m-40} + d_{2^m}
            let exact = m as f64 + 2.0 - 2f64.powi(m - 40) + 2f64.powi(-m) * (1.0 - 2f64.powi(m - 40));
            assert!((p.prefix.re - exact).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn szego_closed_form_matches_operator_product() {
        use crate::op::{Factor, OperatorModel};
        use crate::seq::lacunary_series;
        let half = HolderExponent::new(0.5).unwrap();
        let c1 = BoundedSequence::alternating();
        let c2 = BoundedSequence::from_fn(1.0, |j| Complex::new(0.5, 1.0 / (j + 2) as f64));
        let a1 = lacunary_series(&c1, half, 9).unwrap();
        let a2 = lacunary_series(&c2, half, 9).unwrap();
        let p = OperatorModel::SzegoP;
        let recipe = OperatorRecipe::new(alloc::vec![
            Factor::Phase(p),
            Factor::Multiply(a1),
            Factor::CoPhase(p),
            Factor::Multiply(a2.conj()),
            Factor::Phase(p),
        ]);
        let ops = diagonal_of_recipe(&recipe, TruncationWindow::OneSided(511)).unwrap();
        let closed = szego_product_diagonal(&c1, &c2, half, 9, 512).unwrap();
        for k in 0..512 {
            assert!((ops.get(k) - closed.get(k)).norm() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn pairing_product_diagonal_is_finite_rank() {
        use crate::op::{OperatorModel, OperatorRecipe};
        use crate::seq::{CircleSeries, GaussRational};
        let z = CircleSeries::<GaussRational>::z_pow(1);
        let zi = CircleSeries::<GaussRational>::z_pow(-1);
        let r = OperatorRecipe::phase_times_commutators(OperatorModel::CircleF, &[&z, &zi]);
        let d = weighted_diagonal(&[(GaussRational::one(), r)], TruncationWindow::Symmetric(64)).unwrap();
        assert!(d.complete);
        assert_eq!(d.entries.len(), 1);
        assert_eq!(d.entries.get(&0), Some(&GaussRational::from_i64(-4)));
    }

    #[test]
    fn dyadic_alternating_oscillates() {
        let d = DiagonalSequence::from_rule((1 << 24) + 1, |k| {
            let level = 63 - (k + 1).leading_zeros();
            c(if level % 2 == 0 { 2.0 } else { 0.0 } / (k + 1) as f64)
        });
        let lm = log_mean(&d, &Schedule::dyadic(4, 24)).unwrap();
        // naive running sum as the oracle
        let mut acc = 0.0f64;
        let mut naive = Vec::new();
        for k in 0..=(1u64 << 24) {
            let level = 63 - (k + 1).leading_zeros();
            if level % 2 == 0 {
                acc += 2.0 / (k + 1) as f64;
            }
            if k.is_power_of_two() && k >= 16 {
                naive.push(acc / (2.0 + k as f64).ln());
            }
        }
        for (p, v) in lm.points().iter().zip(&naive) {
            assert!((p.value.re - v).abs() < 1e-9);
        }
        let pr = probe(&lm).unwrap();
        assert!(pr.oscillating);
        assert!(pr.min <= pr.mean && pr.mean <= pr.max);
        assert!((pr.min - 1.0474).abs() < 1e-4 && (pr.max - 1.1125).abs() < 1e-4, "{pr:?}");
    }

    #[test]
    fn summable_diagonal_decays_like_inverse_log() {
        let d = DiagonalSequence::from_rule((1 << 20) + 1, |k| c(0.5f64.powi(k.min(2000) as i32)));
        let lm = log_mean(&d, &Schedule::dyadic(4, 20)).unwrap();
        let last = lm.last().unwrap();
        assert!((last.value.re - 2.0 / (2.0 + (1u64 << 20) as f64).ln()).abs() < 1e-12);
        for p in lm.points() {
            assert!(p.value.norm() <= 2.0 / (2.0 + p.n as f64).ln() + 1e-15);
        }
    }

    proptest::proptest! {
        #[test]
        fn log_mean_is_linear(xs in proptest::collection::vec(-1000i32..1000, 64), ys in proptest::collection::vec(-1000i32..1000, 64)) {
            // small integers keep every partial sum exact in floating point
            let a = DiagonalSequence::from_values(xs.iter().map(|x| c(*x as f64)).collect(), DiagonalOrder::OneSided);
            let b = DiagonalSequence::from_values(ys.iter().map(|y| c(*y as f64)).collect(), DiagonalOrder::OneSided);
            let s = Schedule::dyadic(1, 5);
            let sum = log_mean(&a.add(&b).unwrap(), &s).unwrap();
            let la = log_mean(&a, &s).unwrap();
            let lb = log_mean(&b, &s).unwrap();
            for ((p, q), r) in sum.points().iter().zip(la.points()).zip(lb.points()) {
                proptest::prop_assert_eq!(p.prefix, q.prefix + r.prefix);
            }
        }
    }
}
