use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Debug;
use core::hash::Hash;

use num_traits::Float;

use super::scalar::{Complex, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Circle,
    Torus,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Circle => "circle",
            Domain::Torus => "torus",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Domain::Circle => 1,
            Domain::Torus => 2,
        }
    }
}

/// A Fourier frequency: `i64` on the circle, [`TorusIndex`] on the torus.
pub trait FrequencyIndex: Copy + Ord + Hash + Debug + Send + Sync + 'static {
    const DOMAIN: Domain;

    fn origin() -> Self;
    fn plus(self, other: Self) -> Self;
    fn negated(self) -> Self;
    fn minus(self, other: Self) -> Self {
        self.plus(other.negated())
    }
    /// `k · θ` for a point given by its angle coordinates.
    fn pair_angle(self, point: &[f64]) -> f64;
    /// Largest absolute coordinate.
    fn sup_norm(self) -> u64;
    /// Coordinates, padded to the domain dimension.
    fn coords(self) -> [i64; 2];
    fn from_coords(c: [i64; 2]) -> Self;
}

impl FrequencyIndex for i64 {
    const DOMAIN: Domain = Domain::Circle;

    fn origin() -> Self {
        0
    }
    fn plus(self, other: Self) -> Self {
        self.checked_add(other).expect("circle frequency overflow")
    }
    fn negated(self) -> Self {
        self.checked_neg().expect("circle frequency overflow")
    }
    fn pair_angle(self, point: &[f64]) -> f64 {
        self as f64 * point[0]
    }
    fn sup_norm(self) -> u64 {
        self.unsigned_abs()
    }
    fn coords(self) -> [i64; 2] {
        [self, 0]
    }
    fn from_coords(c: [i64; 2]) -> Self {
        c[0]
    }
}

/// Lattice point of ℤ², identified with the Gaussian integer `k1 + i k2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TorusIndex {
    pub k1: i64,
    pub k2: i64,
}

impl TorusIndex {
    pub const fn new(k1: i64, k2: i64) -> Self {
        Self { k1, k2 }
    }

    /// `Im(conj(self) · other)`, antisymmetric.
    pub fn cross(self, other: Self) -> i64 {
        self.k1 * other.k2 - self.k2 * other.k1
    }

    pub fn norm_sq(self) -> i64 {
        self.k1 * self.k1 + self.k2 * self.k2
    }

    pub fn is_origin(self) -> bool {
        self.k1 == 0 && self.k2 == 0
    }

    pub fn to_complex(self) -> Complex {
        Complex::new(self.k1 as f64, self.k2 as f64)
    }

    /// `self / |self|`, with the origin sent to 1.
    pub fn unit(self) -> Complex {
        if self.is_origin() {
            Complex::new(1.0, 0.0)
        } else {
            let r = (self.norm_sq() as f64).sqrt();
            Complex::new(self.k1 as f64 / r, self.k2 as f64 / r)
        }
    }

    pub fn scaled(self, t: i64) -> Self {
        Self::new(self.k1 * t, self.k2 * t)
    }
}

impl FrequencyIndex for TorusIndex {
    const DOMAIN: Domain = Domain::Torus;

    fn origin() -> Self {
        Self::new(0, 0)
    }
    fn plus(self, o: Self) -> Self {
        Self::new(
            self.k1.checked_add(o.k1).expect("torus frequency overflow"),
            self.k2.checked_add(o.k2).expect("torus frequency overflow"),
        )
    }
    fn negated(self) -> Self {
        Self::new(-self.k1, -self.k2)
    }
    fn pair_angle(self, point: &[f64]) -> f64 {
        self.k1 as f64 * point[0] + self.k2 as f64 * point[1]
    }
    fn sup_norm(self) -> u64 {
        self.k1.unsigned_abs().max(self.k2.unsigned_abs())
    }
    fn coords(self) -> [i64; 2] {
        [self.k1, self.k2]
    }
    fn from_coords(c: [i64; 2]) -> Self {
        Self::new(c[0], c[1])
    }
}

/// Finitely supported Fourier coefficients `k ↦ a_k`.
///
/// Zero coefficients are never stored, so two series are equal iff their maps are.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries<I: FrequencyIndex, S: Scalar> {
    coeffs: BTreeMap<I, S>,
}

pub type CircleSeries<S> = FourierSeries<i64, S>;

impl<I: FrequencyIndex, S: Scalar> Default for FourierSeries<I, S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<I: FrequencyIndex, S: Scalar> FourierSeries<I, S> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(I::origin(), S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(I::origin(), c)
    }

    pub fn monomial(k: I, c: S) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// Sums repeated frequencies and drops zeros.
    pub fn from_terms<T: IntoIterator<Item = (I, S)>>(terms: T) -> Self {
        let mut coeffs: BTreeMap<I, S> = BTreeMap::new();
        for (k, c) in terms {
            accumulate(&mut coeffs, k, c);
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs }
    }

    pub fn domain(&self) -> Domain {
        I::DOMAIN
    }

    pub fn is_exact(&self) -> bool {
        S::EXACT
    }

    pub fn coeff(&self, k: I) -> S {
        self.coeffs.get(&k).cloned().unwrap_or_else(S::zero)
    }

    pub fn get(&self, k: I) -> Option<&S> {
        self.coeffs.get(&k)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (I, &S)> + ExactSizeIterator {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn support(&self) -> impl Iterator<Item = I> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest sup-norm of a frequency in the support (0 for the zero series).
    pub fn max_frequency(&self) -> u64 {
        self.coeffs.keys().map(|k| k.sup_norm()).max().unwrap_or(0)
    }

    /// Pointwise conjugate: coefficient at `k` is `conj(a_{-k})`.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, c)| (k.negated(), c.conj())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            accumulate(&mut coeffs, *k, c.clone());
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(k, c)| (*k, c.clone() * s.clone())))
    }

    /// Pointwise product, i.e. convolution of coefficient maps.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<I, S> = BTreeMap::new();
        for (m, a) in &self.coeffs {
            for (n, b) in &other.coeffs {
                accumulate(&mut coeffs, m.plus(*n), a.clone() * b.clone());
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs }
    }

    /// `Σ a_k e^{i k·θ}`; `point` holds one angle per dimension.
    pub fn evaluate(&self, point: &[f64]) -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for (k, c) in &self.coeffs {
            let t = k.pair_angle(point);
            acc += c.to_complex() * Complex::new(t.cos(), t.sin());
        }
        acc
    }

    pub fn to_floating(&self) -> FourierSeries<I, Complex> {
        FourierSeries::from_terms(self.coeffs.iter().map(|(k, c)| (*k, c.to_complex())))
    }

    /// Total order on series, used when sorting chain terms.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        let mut a = self.coeffs.iter();
        let mut b = other.coeffs.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ka, ca)), Some((kb, cb))) => {
                    let o = ka.cmp(kb).then_with(|| ca.cmp_canonical(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }

    /// First stored coefficient (smallest frequency), if any.
    pub fn leading(&self) -> Option<(I, &S)> {
        self.coeffs.iter().next().map(|(k, c)| (*k, c))
    }
}

impl<S: Scalar> FourierSeries<i64, S> {
    /// `z^k`.
    pub fn z_pow(k: i64) -> Self {
        Self::monomial(k, S::one())
    }

    /// Support inside `k >= 0`.
    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|&k| k >= 0)
    }

    /// Support inside `k <= 0`.
    pub fn is_antianalytic(&self) -> bool {
        self.coeffs.keys().all(|&k| k <= 0)
    }
}

fn accumulate<I: Ord, S: Scalar>(map: &mut BTreeMap<I, S>, k: I, c: S) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(v) => *v = v.clone() + c,
        None => {
            map.insert(k, c);
        }
    }
}

/// Convenience for building a series from `(k, re, im)` triples.
pub fn circle_from_complex(terms: &[(i64, f64, f64)]) -> CircleSeries<Complex> {
    FourierSeries::from_terms(terms.iter().map(|&(k, re, im)| (k, Complex::new(re, im))))
}

/// Collects the support of several series into one sorted list.
pub fn joint_support<I: FrequencyIndex, S: Scalar>(series: &[&FourierSeries<I, S>]) -> Vec<I> {
    let mut v: Vec<I> = series.iter().flat_map(|s| s.support()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::scalar::GaussRational;

    type Q = GaussRational;

    fn z(k: i64) -> CircleSeries<Q> {
        CircleSeries::z_pow(k)
    }

    #[test]
    fn inverse_pair_and_unit() {
        assert_eq!(z(1).multiply(&z(-1)), CircleSeries::one());
        let f = z(3).add(&z(-2).scale(&Q::from_ints(0, 5)));
        assert_eq!(f.multiply(&CircleSeries::one()), f);
    }

    #[test]
    fn binomial_square() {
        let f = z(1).add(&z(-1));
        let expected = CircleSeries::from_terms([(2, Q::one()), (0, Q::from_i64(2)), (-2, Q::one())]);
        assert_eq!(f.multiply(&f), expected);
    }

    #[test]
    fn conjugation_moves_frequencies() {
        let f = CircleSeries::from_terms([(2, Q::from_ints(1, 1)), (-1, Q::from_ints(0, 3))]);
        let g = f.conj();
        assert_eq!(g.coeff(-2), Q::from_ints(1, -1));
        assert_eq!(g.coeff(1), Q::from_ints(0, -3));
        assert_eq!(g.conj(), f);
    }

    #[test]
    fn lookup_outside_support_is_zero() {
        assert!(z(4).coeff(5).is_zero());
        assert!(z(4).get(5).is_none());
    }

    #[test]
    fn evaluate_monomial() {
        let f = z(1).to_floating();
        assert!((f.evaluate(&[0.0]) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((f.evaluate(&[core::f64::consts::PI]) - Complex::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn torus_cross_is_antisymmetric() {
        let a = TorusIndex::new(2, -3);
        let b = TorusIndex::new(-1, 5);
        assert_eq!(a.cross(b), -b.cross(a));
        // conj(2-3i)(-1+5i) = (2+3i)(-1+5i) = -17 + 7i
        assert_eq!(a.cross(b), 7);
    }

    #[test]
    fn zero_products_are_pruned() {
        let f = z(1).add(&z(1).neg());
        assert!(f.is_empty());
        let g = z(1).sub(&z(-1)).multiply(&z(1).add(&z(-1)));
        assert_eq!(g, z(2).sub(&z(-2)));
    }
}
