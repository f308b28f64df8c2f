//! Dense brute-force references that share no code path with the sparse engine.

use dixlab_core::seq::{CircleSeries, Complex, Scalar};

/// Row-major dense matrix over an index range `lo..=hi` on both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<S: Scalar> {
    pub lo: i64,
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Dense<S> {
    pub fn zeros(lo: i64, hi: i64) -> Self {
        let n = (hi - lo + 1) as usize;
        Self { lo, n, data: vec![S::zero(); n * n] }
    }

    pub fn identity(lo: i64, hi: i64) -> Self {
        let mut m = Self::zeros(lo, hi);
        for i in 0..m.n {
            m.data[i * m.n + i] = S::one();
        }
        m
    }

    pub fn get(&self, row: i64, col: i64) -> &S {
        &self.data[(row - self.lo) as usize * self.n + (col - self.lo) as usize]
    }

    fn set(&mut self, row: i64, col: i64, v: S) {
        let n = self.n;
        self.data[(row - self.lo) as usize * n + (col - self.lo) as usize] = v;
    }

    /// Multiplication by `a`: entry `(k, k')` is `a_{k−k'}`.
    pub fn multiplication(a: &CircleSeries<S>, lo: i64, hi: i64) -> Self {
        let mut m = Self::zeros(lo, hi);
        for r in lo..=hi {
            for c in lo..=hi {
                m.set(r, c, a.coeff(r - c));
            }
        }
        m
    }

    /// Diagonal `diag(f(k))`.
    pub fn diagonal(lo: i64, hi: i64, f: impl Fn(i64) -> S) -> Self {
        let mut m = Self::zeros(lo, hi);
        for k in lo..=hi {
            m.set(k, k, f(k));
        }
        m
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!((self.lo, self.n), (rhs.lo, rhs.n), "dense operands on different ranges");
        let n = self.n;
        let mut out = vec![S::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] = out[i * n + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Self { lo: self.lo, n, data: out }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self { lo: self.lo, n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    /// `A B − B A`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn trace(&self) -> S {
        (0..self.n).fold(S::zero(), |acc, i| acc + self.data[i * self.n + i].clone())
    }
}

/// `sign(k)` with `sign(0) = 1` on `lo..=hi`.
pub fn dense_circle_phase<S: Scalar>(lo: i64, hi: i64) -> Dense<S> {
    Dense::diagonal(lo, hi, |k| if k >= 0 { S::one() } else { -S::one() })
}

/// `diag P W(a1) (1−P) W(a2)* P` at `k = 0..n`, by a dense product over all
/// frequencies the two series can reach.
pub fn dense_szego_product_diagonal(a1: &CircleSeries<Complex>, a2: &CircleSeries<Complex>, n: usize) -> Vec<Complex> {
    let reach = a1.max_frequency().max(a2.max_frequency()) as i64;
    let (lo, hi) = (-(reach + n as i64), n as i64 + reach);
    let w1 = Dense::multiplication(a1, lo, hi);
    let w2_adj = Dense::multiplication(&a2.conj_multiplier(), lo, hi);
    let p = Dense::diagonal(lo, hi, |k| if k >= 0 { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) });
    let q = Dense::identity(lo, hi).sub(&p);
    let product = p.mul(&w1).mul(&q).mul(&w2_adj).mul(&p);
    (0..n as i64).map(|k| *product.get(k, k)).collect()
}

/// Series whose multiplication operator is the adjoint of multiplication by `self`.
trait ConjMultiplier {
    fn conj_multiplier(&self) -> Self;
}

impl ConjMultiplier for CircleSeries<Complex> {
    fn conj_multiplier(&self) -> Self {
        // (M_a)* has entry (k,k') = conj(a_{k'−k}), i.e. multiplication by k ↦ conj(a_{−k}).
        CircleSeries::from_terms(self.iter().map(|(k, c)| (-k, c.conj())))
    }
}

/// `(1 / log(2+N)) Σ_{k<=N} d_k` by plain summation.
pub fn naive_log_mean(d: &[Complex], n: usize) -> Complex {
    d[..=n].iter().sum::<Complex>() / (2.0 + n as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dixlab_core::seq::GaussRational as Q;

    #[test]
    fn dense_winding_trace() {
        let (lo, hi) = (-6, 6);
        let f = dense_circle_phase::<Q>(lo, hi);
        let z = Dense::multiplication(&CircleSeries::z_pow(1), lo, hi);
        let zi = Dense::multiplication(&CircleSeries::z_pow(-1), lo, hi);
        let t = f.mul(&f.commutator(&z)).mul(&f.commutator(&zi)).trace();
        assert_eq!(t, Q::from_ints(-4, 0));
    }

    #[test]
    fn single_mode_szego_product() {
        // a1 = a2 = z^4: the diagonal is 1 for k < 4 and 0 after.
        let z4 = CircleSeries::from_terms([(4, Complex::new(1.0, 0.0))]);
        let d = dense_szego_product_diagonal(&z4, &z4, 8);
        let expect = [1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        assert!(d.iter().zip(expect).all(|(a, b)| (a.re - b).abs() < 1e-15 && a.im == 0.0), "{d:?}");
    }
}
