use alloc::vec;
use alloc::vec::Vec;

use super::model::OperatorModel;
use crate::error::Result;
use crate::seq::{FourierSeries, FrequencyIndex, Scalar};

/// Sparse vector in the Fourier basis, sorted by index with no zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVector<I: FrequencyIndex, S: Scalar> {
    entries: Vec<(I, S)>,
}

impl<I: FrequencyIndex, S: Scalar> SparseVector<I, S> {
    pub fn basis(k: I) -> Self {
        Self { entries: vec![(k, S::one())] }
    }

    /// Sorts, merges repeated indices and drops zeros.
    pub fn from_unsorted(mut raw: Vec<(I, S)>) -> Self {
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut entries: Vec<(I, S)> = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            match entries.last_mut() {
                Some((j, acc)) if *j == k => *acc = acc.clone() + v,
                _ => entries.push((k, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        Self { entries }
    }

    pub fn entries(&self) -> &[(I, S)] {
        &self.entries
    }

    pub fn get(&self, k: I) -> S {
        match self.entries.binary_search_by(|e| e.0.cmp(&k)) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ conj(self_i) other_i`.
    pub fn inner(&self, other: &Self) -> S {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = S::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    acc = acc + a[i].1.conj() * b[j].1.clone();
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// One factor of an operator product.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor<I: FrequencyIndex, S: Scalar> {
    /// The diagonal phase operator itself.
    Phase(OperatorModel),
    /// `1 - phase`, e.g. `1 - P`.
    CoPhase(OperatorModel),
    /// Multiplication by a series.
    Multiply(FourierSeries<I, S>),
    /// `[op, M_a]`.
    Commutator(OperatorModel, FourierSeries<I, S>),
}

impl<I: FrequencyIndex, S: Scalar> Factor<I, S> {
    pub fn adjoint(&self) -> Self {
        match self {
            Factor::Phase(m) => Factor::Phase(m.adjoint()),
            Factor::CoPhase(m) => Factor::CoPhase(m.adjoint()),
            Factor::Multiply(a) => Factor::Multiply(a.conj()),
            // [T, M_a]* = -[T*, M_{a*}]
            Factor::Commutator(m, a) => Factor::Commutator(m.adjoint(), a.conj().neg()),
        }
    }

    pub fn is_commutator(&self) -> bool {
        matches!(self, Factor::Commutator(..))
    }

    pub fn apply(&self, v: &SparseVector<I, S>) -> Result<SparseVector<I, S>> {
        let mut out: Vec<(I, S)> = Vec::new();
        match self {
            Factor::Phase(m) => {
                for (k, x) in &v.entries {
                    out.push((*k, m.phase_scalar::<I, S>(*k)? * x.clone()));
                }
            }
            Factor::CoPhase(m) => {
                for (k, x) in &v.entries {
                    out.push((*k, (S::one() - m.phase_scalar::<I, S>(*k)?) * x.clone()));
                }
            }
            Factor::Multiply(a) => {
                out.reserve(v.entries.len() * a.len());
                for (k, x) in &v.entries {
                    for (m, c) in a.iter() {
                        out.push((k.plus(m), c.clone() * x.clone()));
                    }
                }
            }
            Factor::Commutator(model, a) => {
                for (k, x) in &v.entries {
                    let pk: S = model.phase_scalar(*k)?;
                    for (m, c) in a.iter() {
                        let t = k.plus(m);
                        let d = model.phase_scalar::<I, S>(t)? - pk.clone();
                        if !d.is_zero() {
                            out.push((t, c.clone() * d * x.clone()));
                        }
                    }
                }
            }
        }
        Ok(SparseVector::from_unsorted(out))
    }
}

/// An operator product `F_1 F_2 ... F_r`, evaluated exactly on basis vectors.
///
/// Nothing is truncated: vectors are propagated through every factor, so the
/// diagonal entries are those of the infinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorRecipe<I: FrequencyIndex, S: Scalar> {
    factors: Vec<Factor<I, S>>,
}

impl<I: FrequencyIndex, S: Scalar> OperatorRecipe<I, S> {
    pub fn new(factors: Vec<Factor<I, S>>) -> Self {
        Self { factors }
    }

    /// `phase · Π [phase, a_i]`.
    pub fn phase_times_commutators(model: OperatorModel, inputs: &[&FourierSeries<I, S>]) -> Self {
        let mut f = vec![Factor::Phase(model)];
        f.extend(inputs.iter().map(|a| Factor::Commutator(model, (*a).clone())));
        Self::new(f)
    }

    pub fn factors(&self) -> &[Factor<I, S>] {
        &self.factors
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.factors.iter().rev().map(Factor::adjoint).collect())
    }

    /// `A v`, rightmost factor first.
    pub fn apply(&self, v: &SparseVector<I, S>) -> Result<SparseVector<I, S>> {
        propagate(self.factors.iter().rev(), v.clone())
    }

    /// Where the product is split for diagonal evaluation. Leading
    /// non-commutator factors go left, commutators are halved. Recipes that
    /// differ only by extra leading multipliers therefore share the right half.
    fn split_point(&self) -> usize {
        let lead = self.factors.iter().take_while(|f| !f.is_commutator()).count();
        let comms = self.factors[lead..].iter().filter(|f| f.is_commutator()).count();
        if comms == self.factors.len() - lead {
            lead + comms / 2
        } else {
            self.factors.len() / 2
        }
    }

    /// `<e_k, A e_k>` computed as `<L* e_k, R e_k>` with `A = L R`.
    pub fn diagonal_entry(&self, k: I) -> Result<S> {
        Ok(self.diagonal_entries(&[k])?.pop().expect("one entry"))
    }

    pub fn diagonal_entries(&self, ks: &[I]) -> Result<Vec<S>> {
        let s = self.split_point();
        let left: Vec<Factor<I, S>> = self.factors[..s].iter().map(Factor::adjoint).collect();
        let right = &self.factors[s..];
        ks.iter()
            .map(|&k| {
                let r = propagate(right.iter().rev(), SparseVector::basis(k))?;
                if r.is_empty() {
                    return Ok(S::zero());
                }
                let l = propagate(left.iter(), SparseVector::basis(k))?;
                Ok(l.inner(&r))
            })
            .collect()
    }

    /// Radius beyond which circle diagonals vanish: the rightmost factor is a
    /// circle commutator, which kills `e_k` once `|k|` exceeds the input's reach.
    pub fn circle_diagonal_radius(&self) -> Option<u64> {
        match self.factors.last()? {
            Factor::Commutator(OperatorModel::CircleF | OperatorModel::SzegoP, a) if I::DOMAIN == crate::seq::Domain::Circle => {
                Some(a.max_frequency())
            }
            _ => None,
        }
    }
}

fn propagate<'a, I, S, It>(factors: It, mut v: SparseVector<I, S>) -> Result<SparseVector<I, S>>
where
    I: FrequencyIndex,
    S: Scalar,
    It: Iterator<Item = &'a Factor<I, S>>,
{
    for f in factors {
        if v.is_empty() {
            break;
        }
        v = f.apply(&v)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{CircleSeries, GaussRational as Q};

    fn z(k: i64) -> CircleSeries<Q> {
        CircleSeries::z_pow(k)
    }

    #[test]
    fn commutator_with_z_flips_at_zero() {
        let f = Factor::Commutator(OperatorModel::CircleF, z(1));
        let out = f.apply(&SparseVector::basis(-1i64)).unwrap();
        assert_eq!(out.entries(), &[(0, Q::from_i64(2))]);
        assert!(f.apply(&SparseVector::basis(3i64)).unwrap().is_empty());
    }

    #[test]
    fn pairing_product_diagonal() {
        let r = OperatorRecipe::phase_times_commutators(OperatorModel::CircleF, &[&z(1), &z(-1)]);
        let d: Vec<Q> = (-3..=3).map(|k| r.diagonal_entry(k).unwrap()).collect();
        // [F,z][F,z^-1] e_0 = [F,z](-2 e_{-1}) = -4 e_0; F e_0 = e_0
        let mut expect = vec![Q::zero(); 7];
        expect[3] = Q::from_i64(-4);
        assert_eq!(d, expect);
        assert_eq!(r.circle_diagonal_radius(), Some(1));
    }

    #[test]
    fn adjoint_of_commutator_matches_matrix_adjoint() {
        let a = CircleSeries::from_terms([(2, Q::from_ints(1, 2)), (-1, Q::from_ints(-3, 1))]);
        let c = OperatorRecipe::new(vec![Factor::Commutator(OperatorModel::CircleF, a)]);
        let ca = c.adjoint();
        for i in -4i64..=4 {
            for j in -4i64..=4 {
                let aij = c.apply(&SparseVector::basis(j)).unwrap().get(i);
                let bji = ca.apply(&SparseVector::basis(i)).unwrap().get(j);
                assert_eq!(aij.conj(), bji);
            }
        }
    }
}
