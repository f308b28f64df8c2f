//! Hochschild chains over Laurent polynomials: `b`, `Λ`, wedge chains and
//! pairing with cochains.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cocycle::{wedge_permutations, Cochain};
use crate::error::{Error, Result};
use crate::op::TruncationWindow;
use crate::seq::{CircleSeries, GaussRational, Scalar};
use crate::trace::{log_mean, probe, weighted_diagonal, ExactDiagonal, ExtendedLimitProbe, LogMeanSeries, Schedule};

/// A formal sum `Σ w_t f_{t,0} ⊗ ... ⊗ f_{t,k}` of elementary tensors.
///
/// Terms are kept sorted and merged. With exact scalars every factor is
/// rescaled to leading coefficient 1, so proportional tensors merge too.
/// Equality compares the full monomial expansion.
#[derive(Clone, Debug)]
pub struct LaurentChain<S: Scalar = GaussRational> {
    degree: usize,
    terms: Vec<(S, Vec<CircleSeries<S>>)>,
}

type Tensor<S> = Vec<CircleSeries<S>>;

fn cmp_tensor<S: Scalar>(a: &Tensor<S>, b: &Tensor<S>) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.cmp_canonical(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

impl<S: Scalar> PartialEq for LaurentChain<S> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.monomials() == other.monomials()
    }
}

impl<S: Scalar> LaurentChain<S> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: Vec::new() }
    }

    pub fn elementary(factors: Vec<CircleSeries<S>>) -> Result<Self> {
        Self::from_terms(vec![(S::one(), factors)])
    }

    pub fn from_terms(terms: Vec<(S, Vec<CircleSeries<S>>)>) -> Result<Self> {
        let degree = terms.first().map(|t| t.1.len()).ok_or(Error::Empty("chain terms"))?;
        if degree == 0 || terms.iter().any(|t| t.1.len() != degree) {
            return Err(Error::Invalid("elementary tensors of one chain need a common positive length".into()));
        }
        Ok(Self::canonical(degree - 1, terms))
    }

    fn canonical(degree: usize, raw: Vec<(S, Tensor<S>)>) -> Self {
        let mut terms: Vec<(S, Tensor<S>)> = Vec::with_capacity(raw.len());
        for (mut w, mut t) in raw {
            if w.is_zero() || t.iter().any(|f| f.is_empty()) {
                continue;
            }
            if S::EXACT {
                for f in t.iter_mut() {
                    let lead = f.leading().map(|(_, c)| c.clone()).expect("nonempty factor");
                    let inv = lead.inv().expect("nonzero leading coefficient");
                    *f = f.scale(&inv);
                    w = w * lead;
                }
            }
            terms.push((w, t));
        }
        terms.sort_by(|a, b| cmp_tensor(&a.1, &b.1));
        let mut merged: Vec<(S, Tensor<S>)> = Vec::with_capacity(terms.len());
        for (w, t) in terms {
            match merged.last_mut() {
                Some(last) if cmp_tensor(&last.1, &t) == Ordering::Equal && last.1 == t => {
                    last.0 = last.0.clone() + w;
                }
                _ => merged.push((w, t)),
            }
        }
        merged.retain(|(w, _)| !w.is_zero());
        Self { degree, terms: merged }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(S, Vec<CircleSeries<S>>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.monomials().is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Invalid("adding chains of different degree".into()));
        }
        Ok(Self::canonical(self.degree, self.terms.iter().chain(&other.terms).cloned().collect()))
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::canonical(self.degree, self.terms.iter().map(|(w, t)| (s.clone() * w.clone(), t.clone())).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Expansion into `z^{e_0} ⊗ ... ⊗ z^{e_k}` with coefficients.
    pub fn monomials(&self) -> BTreeMap<Vec<i64>, S> {
        let mut out: BTreeMap<Vec<i64>, S> = BTreeMap::new();
        for (w, t) in &self.terms {
            let mut partial: Vec<(Vec<i64>, S)> = vec![(Vec::new(), w.clone())];
            for f in t {
                partial = partial
                    .iter()
                    .flat_map(|(e, c)| {
                        f.iter().map(move |(k, v)| {
                            let mut e = e.clone();
                            e.push(k);
                            (e, c.clone() * v.clone())
                        })
                    })
                    .collect();
            }
            for (e, c) in partial {
                let slot = out.entry(e).or_insert_with(S::zero);
                *slot = slot.clone() + c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `b(a_0⊗...⊗a_k) = Σ_{i<k} (−1)^i ...⊗a_i a_{i+1}⊗... + (−1)^k a_k a_0⊗a_1⊗...⊗a_{k−1}`.
    pub fn boundary(&self) -> Result<Self> {
        let k = self.degree;
        if k == 0 {
            return Err(Error::Invalid("a degree 0 chain has no boundary".into()));
        }
        let mut out = Vec::with_capacity(self.terms.len() * (k + 1));
        for (w, t) in &self.terms {
            for i in 0..k {
                let mut f: Tensor<S> = t[..i].to_vec();
                f.push(t[i].multiply(&t[i + 1]));
                f.extend_from_slice(&t[i + 2..]);
                out.push((sign::<S>(i) * w.clone(), f));
            }
            let mut f = vec![t[k].multiply(&t[0])];
            f.extend_from_slice(&t[1..k]);
            out.push((sign::<S>(k) * w.clone(), f));
        }
        Ok(Self::canonical(k - 1, out))
    }

    /// `Λ(a_0⊗...⊗a_k) = (−1)^k a_1⊗...⊗a_k⊗a_0`.
    pub fn cyclic_lambda(&self) -> Self {
        let k = self.degree;
        let terms = self
            .terms
            .iter()
            .map(|(w, t)| {
                let mut f = t[1..].to_vec();
                f.push(t[0].clone());
                (sign::<S>(k) * w.clone(), f)
            })
            .collect();
        Self::canonical(k, terms)
    }

    /// `a_0 ∧ a_1 ∧ ... ∧ a_k = Σ_σ sign(σ) a_0 ⊗ a_σ(1) ⊗ ... ⊗ a_σ(k)`.
    pub fn wedge(a: &[CircleSeries<S>]) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::Invalid("wedge needs at least two slots".into()));
        }
        let terms = wedge_permutations(a.len() - 1)
            .into_iter()
            .map(|(s, p)| {
                let mut f = vec![a[0].clone()];
                f.extend(p.iter().map(|&i| a[i].clone()));
                (S::from_i64(s), f)
            })
            .collect();
        Ok(Self::canonical(a.len() - 1, terms))
    }
}

fn sign<S: Scalar>(i: usize) -> S {
    if i % 2 == 0 {
        S::one()
    } else {
        -S::one()
    }
}

/// `φ(x)` for a chain `x`: exact when every product is finite rank, otherwise
/// a log-mean probe of the summed diagonals.
#[derive(Clone, Debug)]
pub struct Pairing<S: Scalar> {
    pub exact: Option<S>,
    pub diagonal: ExactDiagonal<S>,
    pub series: LogMeanSeries,
    pub probe: Option<ExtendedLimitProbe>,
}

pub fn pair<S: Scalar>(cochain: &Cochain, x: &LaurentChain<S>, schedule: &Schedule) -> Result<Pairing<S>> {
    if cochain.arity() != x.degree() + 1 {
        return Err(Error::Arity { expected: cochain.arity(), got: x.degree() + 1 });
    }
    let mut terms = Vec::new();
    for (w, t) in x.terms() {
        terms.extend(cochain.terms(t)?.into_iter().map(|(c, r)| (w.clone() * c, r)));
    }
    let w = cochain.spec().default_window(schedule.max_n());
    let diagonal = weighted_diagonal(&terms, w)?;
    let series = log_mean(&diagonal.to_sequence(), schedule)?;
    let probe = if series.len() >= 3 { Some(probe(&series)?) } else { None };
    let exact = diagonal.complete.then(|| diagonal.total());
    Ok(Pairing { exact, diagonal, series, probe })
}

/// Exact finite-rank pairing on a window large enough for every product.
pub fn pair_exact<S: Scalar>(cochain: &Cochain, x: &LaurentChain<S>) -> Result<S> {
    if cochain.arity() != x.degree() + 1 {
        return Err(Error::Arity { expected: cochain.arity(), got: x.degree() + 1 });
    }
    let mut terms = Vec::new();
    for (w, t) in x.terms() {
        terms.extend(cochain.terms(t)?.into_iter().map(|(c, r)| (w.clone() * c, r)));
    }
    let radius = terms
        .iter()
        .map(|(_, r)| r.circle_diagonal_radius())
        .try_fold(0u64, |acc, r| r.map(|r| acc.max(r)))
        .ok_or(Error::Invalid("pairing is not finite rank".into()))?;
    Ok(weighted_diagonal(&terms, TruncationWindow::Symmetric(radius))?.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::FredholmModuleSpec;
    use crate::seq::GaussRational as Q;
    use proptest::prelude::*;

    fn z(k: i64) -> CircleSeries<Q> {
        CircleSeries::z_pow(k)
    }

    fn one() -> CircleSeries<Q> {
        CircleSeries::one()
    }

    fn chain(terms: &[(i64, &[CircleSeries<Q>])]) -> LaurentChain<Q> {
        LaurentChain::from_terms(terms.iter().map(|(w, t)| (Q::from_i64(*w), t.to_vec())).collect()).unwrap()
    }

    #[test]
    fn boundary_of_unit_tensor() {
        let x = chain(&[(1, &[one(), z(1), z(-1)])]);
        let expect = chain(&[(1, &[z(1), z(-1)]), (-1, &[one(), one()]), (1, &[z(-1), z(1)])]);
        assert_eq!(x.boundary().unwrap(), expect);
    }

    #[test]
    fn boundary_of_degree_one_vanishes() {
        let f = CircleSeries::from_terms([(2, Q::from_ints(1, 1)), (-3, Q::from_fractions((1, 2), (0, 1)))]);
        let x = chain(&[(1, &[f, z(5)])]);
        assert!(x.boundary().unwrap().is_zero());
        assert!(chain(&[(1, &[z(1)])]).boundary().is_err());
    }

    #[test]
    fn lambda_examples() {
        let x = chain(&[(1, &[z(1), z(-1)])]);
        assert_eq!(x.cyclic_lambda(), chain(&[(-1, &[z(-1), z(1)])]));
        assert_eq!(x.sub(&x.cyclic_lambda()).unwrap(), chain(&[(1, &[z(1), z(-1)]), (1, &[z(-1), z(1)])]));
    }

    #[test]
    fn proportional_tensors_merge() {
        let two_z = z(1).scale(&Q::from_i64(2));
        let x = chain(&[(1, &[two_z, z(-1)]), (-2, &[z(1), z(-1)])]);
        assert!(x.terms().is_empty());
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(LaurentChain::wedge(&[one(), z(1)]).unwrap(), chain(&[(1, &[one(), z(1)])]));
        assert!(LaurentChain::wedge(&[z(2), z(1), z(-3), z(1)]).unwrap().is_zero());
    }

    #[test]
    fn pairing_of_winding_chain() {
        let x = chain(&[(1, &[z(1), z(-1)])]);
        assert_eq!(pair_exact(&Cochain::circle_pairing(), &x).unwrap(), Q::from_i64(-1));
        let p = pair(&Cochain::circle_pairing(), &x, &Schedule::dyadic(2, 6)).unwrap();
        assert_eq!(p.exact, Some(Q::from_i64(-1)));
        assert_eq!(pair_exact(&Cochain::circle_pairing(), &LaurentChain::<Q>::zero(1)).unwrap(), Q::zero());
        assert!(matches!(pair_exact(&Cochain::circle_pairing(), &LaurentChain::<Q>::zero(2)), Err(Error::Arity { .. })));
    }

    fn series() -> impl Strategy<Value = CircleSeries<Q>> {
        proptest::collection::vec((-3i64..=3, -4i64..=4, -4i64..=4), 1..=3)
            .prop_map(|v| CircleSeries::from_terms(v.into_iter().map(|(k, a, b)| (k, Q::from_ints(a, b)))))
    }

    fn chains(max_degree: usize) -> impl Strategy<Value = LaurentChain<Q>> {
        (1..=max_degree).prop_flat_map(|k| {
            proptest::collection::vec((-3i64..=3, proptest::collection::vec(series(), k + 1)), 1..=3)
                .prop_map(|ts| LaurentChain::canonical(ts[0].1.len() - 1, ts.into_iter().map(|(w, t)| (Q::from_i64(w), t)).collect()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn boundary_squares_to_zero(x in chains(4)) {
            prop_assume!(x.degree() >= 2);
            prop_assert!(x.boundary().unwrap().boundary().unwrap().is_zero());
        }

        #[test]
        fn lambda_has_order_degree_plus_one(x in chains(4)) {
            let mut y = x.clone();
            for _ in 0..=x.degree() {
                y = y.cyclic_lambda();
            }
            prop_assert_eq!(y, x);
        }

        #[test]
        fn wedge_is_a_cycle(a in proptest::collection::vec(series(), 4)) {
            prop_assert!(LaurentChain::wedge(&a).unwrap().boundary().unwrap().is_zero());
        }

        #[test]
        fn cyclic_cochain_is_lambda_invariant(x in chains(1)) {
            let c = Cochain::Cyclic(FredholmModuleSpec::circle(1).unwrap());
            prop_assert_eq!(pair_exact(&c, &x.cyclic_lambda()).unwrap(), pair_exact(&c, &x).unwrap());
        }

        #[test]
        fn coboundary_is_adjoint_to_boundary(x in chains(3)) {
            prop_assume!(x.degree() >= 2);
            // φ has arity `degree`, so bφ pairs with x and φ with bx
            let spec = FredholmModuleSpec::circle(1).unwrap();
            let phi = if x.degree() == 2 { Cochain::Cyclic(spec) } else { Cochain::Hochschild(spec) };
            let lhs = pair_exact(&phi.clone().coboundary(), &x).unwrap();
            let rhs = pair_exact(&phi, &x.boundary().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
