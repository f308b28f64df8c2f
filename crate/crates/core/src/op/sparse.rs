use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::model::OperatorModel;
use super::recipe::{Factor, OperatorRecipe, SparseVector};
use super::window::TruncationWindow;
use crate::error::{Error, Result};
use crate::seq::{Complex, FourierSeries, FrequencyIndex, Scalar};

/// Matrix of an operator compressed to a window, `P_w A P_w`.
///
/// `spill_out`/`spill_in` record whether the uncompressed operator maps window
/// columns outside the window, or outside columns into window rows. A product
/// of compressions equals the compression of the product unless a factor
/// spills in after its right neighbour spilled out; that case sets `leaky`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<I: FrequencyIndex, S: Scalar> {
    window: TruncationWindow,
    basis: Vec<I>,
    entries: BTreeMap<(I, I), S>,
    spill_out: bool,
    spill_in: bool,
    leaky: bool,
    reach: u64,
}

impl<I: FrequencyIndex, S: Scalar> SparseOperator<I, S> {
    pub fn identity(w: TruncationWindow) -> Result<Self> {
        let basis: Vec<I> = w.basis()?;
        let entries = basis.iter().map(|&k| ((k, k), S::one())).collect();
        Ok(Self { window: w, basis, entries, spill_out: false, spill_in: false, leaky: false, reach: 0 })
    }

    /// Exact compression of a product to `w`.
    pub fn from_recipe(recipe: &OperatorRecipe<I, S>, w: TruncationWindow) -> Result<Self> {
        let basis: Vec<I> = w.basis()?;
        let mut entries = BTreeMap::new();
        let mut spill_out = false;
        for &col in &basis {
            for (row, v) in recipe.apply(&SparseVector::basis(col))?.entries() {
                if w.contains(*row) {
                    entries.insert((*row, col), v.clone());
                } else {
                    spill_out = true;
                }
            }
        }
        let adj = recipe.adjoint();
        let mut spill_in = false;
        for &row in &basis {
            if adj.apply(&SparseVector::basis(row))?.entries().iter().any(|(c, _)| !w.contains(*c)) {
                spill_in = true;
                break;
            }
        }
        let reach = recipe
            .factors()
            .iter()
            .map(|f| match f {
                Factor::Multiply(a) | Factor::Commutator(_, a) => a.max_frequency(),
                _ => 0,
            })
            .sum();
        Ok(Self { window: w, basis, entries, spill_out, spill_in, leaky: false, reach })
    }

    pub fn window(&self) -> TruncationWindow {
        self.window
    }

    pub fn basis(&self) -> &[I] {
        &self.basis
    }

    pub fn entries(&self) -> impl Iterator<Item = (I, I, &S)> {
        self.entries.iter().map(|((r, c), v)| (*r, *c, v))
    }

    pub fn get(&self, row: I, col: I) -> S {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(S::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_leaky(&self) -> bool {
        self.leaky
    }

    /// Sup-distance by which the window must grow for an exact product.
    pub fn reach(&self) -> u64 {
        self.reach
    }

    /// Diagonal in the window's canonical order; refuses leaky products.
    pub fn diagonal(&self) -> Result<Vec<S>> {
        if self.leaky {
            return Err(Error::Leakage { inflate_by: self.reach });
        }
        Ok(self.basis.iter().map(|&k| self.get(k, k)).collect())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|((r, c), v)| ((*c, *r), v.conj())).collect(),
            spill_out: self.spill_in,
            spill_in: self.spill_out,
            ..self.clone()
        }
    }

    pub fn to_floating(&self) -> SparseOperator<I, Complex> {
        SparseOperator {
            window: self.window,
            basis: self.basis.clone(),
            entries: self.entries.iter().map(|(k, v)| (*k, v.to_complex())).collect(),
            spill_out: self.spill_out,
            spill_in: self.spill_in,
            leaky: self.leaky,
            reach: self.reach,
        }
    }

    /// Matrix product `self · rhs` on the common window.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.window != rhs.window {
            return Err(Error::WindowMismatch);
        }
        let mut by_col: BTreeMap<I, Vec<(I, &S)>> = BTreeMap::new();
        for ((r, c), v) in &self.entries {
            by_col.entry(*c).or_default().push((*r, v));
        }
        let mut entries: BTreeMap<(I, I), S> = BTreeMap::new();
        for ((k, j), b) in &rhs.entries {
            if let Some(col) = by_col.get(k) {
                for (i, a) in col {
                    let p = (*a).clone() * b.clone();
                    let e = entries.entry((*i, *j)).or_insert_with(S::zero);
                    *e = e.clone() + p;
                }
            }
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(Self {
            window: self.window,
            basis: self.basis.clone(),
            entries,
            spill_out: self.spill_out || rhs.spill_out,
            spill_in: self.spill_in || rhs.spill_in,
            leaky: self.leaky || rhs.leaky || (self.spill_in && rhs.spill_out),
            reach: self.reach + rhs.reach,
        })
    }
}

/// `[op, M_a]` compressed to `w`: entry `(k, k')` is `a_{k-k'} (phase(k) - phase(k'))`.
pub fn commutator<I: FrequencyIndex, S: Scalar>(
    op: OperatorModel,
    a: &FourierSeries<I, S>,
    w: TruncationWindow,
) -> Result<SparseOperator<I, S>> {
    if op.domain() != I::DOMAIN || w.domain() != I::DOMAIN {
        return Err(Error::Domain("commutator operands"));
    }
    SparseOperator::from_recipe(&OperatorRecipe::new(vec![Factor::Commutator(op, a.clone())]), w)
}

/// Ordered product; the empty product is the identity on `w`.
pub fn compose<I: FrequencyIndex, S: Scalar>(
    w: TruncationWindow,
    ops: &[SparseOperator<I, S>],
) -> Result<SparseOperator<I, S>> {
    let mut acc = SparseOperator::identity(w)?;
    for op in ops {
        acc = acc.mul(op)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{CircleSeries, GaussRational as Q};

    fn z(k: i64) -> CircleSeries<Q> {
        CircleSeries::z_pow(k)
    }

    const W4: TruncationWindow = TruncationWindow::Symmetric(4);

    #[test]
    fn commutator_with_z_single_entry() {
        let c = commutator(OperatorModel::CircleF, &z(1), W4).unwrap();
        let e: Vec<_> = c.entries().map(|(r, c, v)| (r, c, v.clone())).collect();
        assert_eq!(e, [(0, -1, Q::from_i64(2))]);
    }

    #[test]
    fn commutator_with_constant_vanishes() {
        let c = commutator(OperatorModel::CircleF, &CircleSeries::constant(Q::from_i64(7)), W4).unwrap();
        assert_eq!(c.nnz(), 0);
    }

    #[test]
    fn pairing_composition() {
        let a = commutator(OperatorModel::CircleF, &z(1), W4).unwrap();
        let b = commutator(OperatorModel::CircleF, &z(-1), W4).unwrap();
        let p = compose(W4, &[a.clone(), b]).unwrap();
        let e: Vec<_> = p.entries().map(|(r, c, v)| (r, c, v.clone())).collect();
        assert_eq!(e, [(0, 0, Q::from_i64(-4))]);
        assert!(!p.is_leaky());
        assert_eq!(compose(W4, &[a.clone(), SparseOperator::identity(W4).unwrap()]).unwrap(), a.clone().mul(&SparseOperator::identity(W4).unwrap()).unwrap());
        assert_eq!(compose::<i64, Q>(W4, &[]).unwrap(), SparseOperator::identity(W4).unwrap());
    }

    #[test]
    fn window_mismatch_is_reported() {
        let a = commutator(OperatorModel::CircleF, &z(1), W4).unwrap();
        let b = commutator(OperatorModel::CircleF, &z(1), TruncationWindow::Symmetric(5)).unwrap();
        assert_eq!(a.mul(&b), Err(Error::WindowMismatch));
    }

    #[test]
    fn boundary_products_are_flagged() {
        // z^3 pushes e_2 out of {-4..4}; z^-3 brings e_5 back in.
        let w = TruncationWindow::Symmetric(4);
        let m = |k| SparseOperator::from_recipe(&OperatorRecipe::new(vec![Factor::Multiply(z(k))]), w).unwrap();
        let p = m(-3).mul(&m(3)).unwrap();
        assert!(p.is_leaky());
        assert!(matches!(p.diagonal(), Err(Error::Leakage { .. })));
        // The exact compression of the product is the identity.
        let exact = SparseOperator::from_recipe(
            &OperatorRecipe::new(vec![Factor::Multiply(z(-3)), Factor::Multiply(z(3))]),
            w,
        )
        .unwrap();
        assert_eq!(exact.diagonal().unwrap(), vec![Q::one(); 9]);
    }

    #[test]
    fn torus_commutator_rejects_block_model() {
        use crate::seq::TorusIndex;
        let a = FourierSeries::<TorusIndex, Complex>::monomial(TorusIndex::new(1, 0), Complex::new(1.0, 0.0));
        assert!(commutator(OperatorModel::TorusF, &a, TruncationWindow::Shells(3)).is_err());
        assert!(commutator(OperatorModel::TorusU, &a, TruncationWindow::Shells(3)).is_ok());
    }
}
