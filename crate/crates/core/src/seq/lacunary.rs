use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use super::scalar::Complex;
use super::series::CircleSeries;
use crate::error::{Error, Result};

/// Hölder exponent together with the dimension of the underlying domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderExponent {
    alpha: f64,
    dim: u32,
}

impl HolderExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_dim(alpha, 1)
    }

    pub fn torus(alpha: f64) -> Result<Self> {
        Self::with_dim(alpha, 2)
    }

    pub fn with_dim(alpha: f64, dim: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) || !(1..=2).contains(&dim) {
            return Err(Error::Exponent(alpha));
        }
        Ok(Self { alpha, dim })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn dim(self) -> u32 {
        self.dim
    }

    /// Weak-Schatten exponent `dim / alpha` of commutators with such functions.
    pub fn summability(self) -> f64 {
        self.dim as f64 / self.alpha
    }
}

type EntryFn = dyn Fn(u64) -> Complex + Send + Sync;

#[derive(Clone)]
enum Rule {
    Eventually { head: Vec<Complex>, tail: Complex },
    Finite(Vec<Complex>),
    Callback(Arc<EntryFn>),
}

/// A bounded sequence `ℕ → ℂ` with a declared sup bound.
#[derive(Clone)]
pub struct BoundedSequence {
    rule: Rule,
    bound: f64,
}

impl fmt::Debug for BoundedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.rule {
            Rule::Eventually { head, tail } => format!("eventually({} head, tail {})", head.len(), tail),
            Rule::Finite(v) => format!("finite({})", v.len()),
            Rule::Callback(_) => "callback".into(),
        };
        f.debug_struct("BoundedSequence").field("rule", &kind).field("bound", &self.bound).finish()
    }
}

impl BoundedSequence {
    pub fn constant(c: Complex) -> Self {
        Self::eventually(Vec::new(), c)
    }

    pub fn ones() -> Self {
        Self::constant(Complex::new(1.0, 0.0))
    }

    pub fn zeros() -> Self {
        Self::constant(Complex::new(0.0, 0.0))
    }

    pub fn eventually(head: Vec<Complex>, tail: Complex) -> Self {
        let bound = head.iter().map(|c| c.norm()).fold(tail.norm(), f64::max);
        Self { rule: Rule::Eventually { head, tail }, bound }
    }

    /// Given entries, zero afterwards.
    pub fn finite(entries: Vec<Complex>) -> Self {
        let bound = entries.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Self { rule: Rule::Finite(entries), bound }
    }

    /// Entries from a closure; `bound` is checked whenever entries are consumed.
    pub fn from_fn<F>(bound: f64, f: F) -> Self
    where
        F: Fn(u64) -> Complex + Send + Sync + 'static,
    {
        Self { rule: Rule::Callback(Arc::new(f)), bound }
    }

    /// `(-1)^k`.
    pub fn alternating() -> Self {
        Self::from_fn(1.0, |k| Complex::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
    }

    /// `(-1)^{⌊log₂(k+1)⌋}`: constant on dyadic blocks, flipping sign block to block.
    pub fn dyadic_alternating() -> Self {
        Self::from_fn(1.0, |k| {
            let level = 63 - (k + 1).leading_zeros();
            Complex::new(if level % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        })
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn get(&self, k: u64) -> Complex {
        match &self.rule {
            Rule::Eventually { head, tail } => head.get(k as usize).copied().unwrap_or(*tail),
            Rule::Finite(v) => v.get(k as usize).copied().unwrap_or(Complex::new(0.0, 0.0)),
            Rule::Callback(f) => f(k),
        }
    }

    /// Checked entry: errors if the declared bound is violated.
    pub fn try_get(&self, k: u64) -> Result<Complex> {
        let v = self.get(k);
        if !(v.norm() <= self.bound * (1.0 + 1e-12)) {
            return Err(Error::Invalid(format!(
                "sequence entry {k} has modulus {} above the declared bound {}",
                v.norm(),
                self.bound
            )));
        }
        Ok(v)
    }

    /// Entrywise `self_k · conj(other_k)`.
    pub fn times_conj(&self, other: &BoundedSequence) -> BoundedSequence {
        let (a, b) = (self.clone(), other.clone());
        Self::from_fn(self.bound * other.bound, move |k| a.get(k) * b.get(k).conj())
    }

    pub fn add(&self, other: &BoundedSequence) -> BoundedSequence {
        let (a, b) = (self.clone(), other.clone());
        Self::from_fn(self.bound + other.bound, move |k| a.get(k) + b.get(k))
    }

    pub fn prefix(&self, len: usize) -> Vec<Complex> {
        (0..len as u64).map(|k| self.get(k)).collect()
    }
}

/// Weights `c_k 2^{-αk}` for `k = 0..=level_cap`.
pub fn lacunary_weights(c: &BoundedSequence, alpha: HolderExponent, level_cap: u32) -> Result<Vec<Complex>> {
    let a = alpha.alpha();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Exponent(a));
    }
    if level_cap == 0 || level_cap > 62 {
        return Err(Error::LevelCap(level_cap));
    }
    (0..=level_cap as u64)
        .map(|k| Ok(c.try_get(k)? * 2f64.powf(-a * k as f64)))
        .collect()
}

/// `Σ_{k ≤ level_cap} c_k 2^{-αk} z^{2^k}`.
pub fn lacunary_series(c: &BoundedSequence, alpha: HolderExponent, level_cap: u32) -> Result<CircleSeries<Complex>> {
    let w = lacunary_weights(c, alpha, level_cap)?;
    Ok(CircleSeries::from_terms(w.into_iter().enumerate().map(|(k, v)| (1i64 << k, v))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_at_half_level_four() {
        let f = lacunary_series(&BoundedSequence::ones(), HolderExponent::new(0.5).unwrap(), 4).unwrap();
        let expect = [(1, 1.0), (2, 0.5f64.sqrt()), (4, 0.5), (8, 0.125f64.sqrt()), (16, 0.25)];
        assert_eq!(f.len(), 5);
        for (k, v) in expect {
            assert!((f.coeff(k) - Complex::new(v, 0.0)).norm() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn zero_sequence_gives_zero_series() {
        let f = lacunary_series(&BoundedSequence::zeros(), HolderExponent::new(0.5).unwrap(), 10).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn evaluate_at_zero_level_three() {
        let f = lacunary_series(&BoundedSequence::ones(), HolderExponent::new(0.5).unwrap(), 3).unwrap();
        let v = f.evaluate(&[0.0]);
        let expect = 1.0 + 0.5f64.sqrt() + 0.5 + 0.125f64.sqrt();
        assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-14);
        assert!((v.re - 2.5607).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_arguments() {
        let c = BoundedSequence::ones();
        assert!(matches!(
            lacunary_series(&c, HolderExponent::new(1.0).unwrap(), 3),
            Err(Error::Exponent(_))
        ));
        assert!(HolderExponent::new(0.0).is_err());
        assert!(HolderExponent::new(1.5).is_err());
        let half = HolderExponent::new(0.5).unwrap();
        assert_eq!(lacunary_series(&c, half, 63), Err(Error::LevelCap(63)));
        assert_eq!(lacunary_series(&c, half, 0), Err(Error::LevelCap(0)));
        assert!(lacunary_series(&c, half, 62).is_ok());
    }

    #[test]
    fn declared_bound_is_enforced() {
        let bad = BoundedSequence::from_fn(1.0, |k| Complex::new(k as f64, 0.0));
        assert!(lacunary_series(&bad, HolderExponent::new(0.5).unwrap(), 4).is_err());
    }

    #[test]
    fn dyadic_alternating_blocks() {
        let s = BoundedSequence::dyadic_alternating();
        let signs: Vec<f64> = (0..8).map(|k| s.get(k).re).collect();
        assert_eq!(signs, [1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0, -1.0]);
        assert_eq!(s.get(3).im, 0.0);
    }
}
