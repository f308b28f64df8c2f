//! The torus phase kernel
//! `ρ(k,m,n) = (m×n + (m−n)×k)/(|n+k||m+k|) + n×k/(|k||k+n|) + k×m/(|k||k+m|)`
//! with `z×w = Im(z̄ w)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{Float, ToPrimitive, Zero};

use crate::error::{Error, KernelGuard, Result};
use crate::seq::{Complex, FourierSeries, TorusIndex};

fn guards(k: TorusIndex, m: TorusIndex, n: TorusIndex) -> Result<()> {
    if k.is_origin() {
        return Err(Error::DegenerateKernel(KernelGuard::K));
    }
    if (k.k1 + m.k1, k.k2 + m.k2) == (0, 0) {
        return Err(Error::DegenerateKernel(KernelGuard::KPlusM));
    }
    if (k.k1 + n.k1, k.k2 + n.k2) == (0, 0) {
        return Err(Error::DegenerateKernel(KernelGuard::KPlusN));
    }
    Ok(())
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn len(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// `ρ` on real vectors; used for homogeneity tests with non-lattice scalings.
pub fn rho_real(k: [f64; 2], m: [f64; 2], n: [f64; 2]) -> Result<f64> {
    let zero = |v: [f64; 2]| v[0] == 0.0 && v[1] == 0.0;
    if zero(k) {
        return Err(Error::DegenerateKernel(KernelGuard::K));
    }
    let (km, kn) = (add(k, m), add(k, n));
    if zero(km) {
        return Err(Error::DegenerateKernel(KernelGuard::KPlusM));
    }
    if zero(kn) {
        return Err(Error::DegenerateKernel(KernelGuard::KPlusN));
    }
    let m_minus_n = [m[0] - n[0], m[1] - n[1]];
    Ok((cross(m, n) + cross(m_minus_n, k)) / (len(kn) * len(km))
        + cross(n, k) / (len(k) * len(kn))
        + cross(k, m) / (len(k) * len(km)))
}

pub fn rho(k: TorusIndex, m: TorusIndex, n: TorusIndex) -> Result<f64> {
    guards(k, m, n)?;
    let f = |t: TorusIndex| [t.k1 as f64, t.k2 as f64];
    rho_real(f(k), f(m), f(n))
}

/// `Im(w z̄ + u w̄ + z ū)` with `w = u(k)`, `z = u(k+n)`, `u = u(k+m)` and the
/// phase of the origin taken as 1. Agrees with [`rho`] wherever that is defined.
pub fn rho_phase(k: TorusIndex, m: TorusIndex, n: TorusIndex) -> f64 {
    let w = k.unit();
    let z = TorusIndex::new(k.k1 + n.k1, k.k2 + n.k2).unit();
    let u = TorusIndex::new(k.k1 + m.k1, k.k2 + m.k2).unit();
    (w * z.conj() + u * w.conj() + z * u.conj()).im
}

/// Both sides of `w(w̄−z̄)(z−u)(ū−w̄) = 2i(z×w + w×u + u×z)` for unit `z, w, u`.
pub fn modulus_one_identity(z: Complex, w: Complex, u: Complex) -> (Complex, Complex) {
    let x = |a: Complex, b: Complex| (a.conj() * b).im;
    let lhs = w * (w.conj() - z.conj()) * (z - u) * (u.conj() - w.conj());
    let rhs = Complex::new(0.0, 2.0) * (x(z, w) + x(w, u) + x(u, z));
    (lhs, rhs)
}

/// `4i Σ_{m,n} ρ(k,m,n) a0_{−n} a1_{n−m} a2_m`, the kernel form of the diagonal
/// entry of `U[U*,a0][U,a1][U*,a2] − U*[U,a0][U*,a1][U,a2]` at `e_k`.
/// Degenerate kernel points use [`rho_phase`].
pub fn kernel_diagonal(
    a0: &FourierSeries<TorusIndex, Complex>,
    a1: &FourierSeries<TorusIndex, Complex>,
    a2: &FourierSeries<TorusIndex, Complex>,
    k: TorusIndex,
) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for (neg_n, c0) in a0.iter() {
        let n = TorusIndex::new(-neg_n.k1, -neg_n.k2);
        for (m, c2) in a2.iter() {
            let c1 = a1.coeff(TorusIndex::new(n.k1 - m.k1, n.k2 - m.k2));
            if c1 == Complex::new(0.0, 0.0) {
                continue;
            }
            let r = rho(k, m, n).unwrap_or_else(|_| rho_phase(k, m, n));
            acc += *c0 * c1 * *c2 * r;
        }
    }
    acc * Complex::new(0.0, 4.0)
}

/// Exact element of `Q(√2, √3, √5, ...)`: `Σ q_r √r` over squarefree `r`.
///
/// Square roots of distinct squarefree integers are linearly independent over
/// the rationals, so this representation is canonical and equality is exact.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SurdSum {
    terms: BTreeMap<u64, Ratio<i128>>,
}

impl SurdSum {
    /// `num / √den` for a positive integer `den`.
    pub fn quotient(num: i128, den: u64) -> Self {
        let mut out = Self::default();
        if num != 0 {
            let (s, r) = square_free_split(den);
            // num/(s√r) = num √r / (s r)
            out.terms.insert(r, Ratio::new(num, s as i128 * r as i128));
        }
        out
    }

    pub fn add(mut self, other: &Self) -> Self {
        for (r, q) in &other.terms {
            let e = self.terms.entry(*r).or_insert_with(Ratio::zero);
            *e += *q;
        }
        self.terms.retain(|_, q| !q.is_zero());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(r, q)| (*r, -*q)).collect() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Ratio<i128>)> + '_ {
        self.terms.iter().map(|(r, q)| (*r, *q))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, q)| q.to_f64().unwrap_or(f64::NAN) * (*r as f64).sqrt())
            .sum()
    }
}

/// `ρ` in exact arithmetic.
pub fn rho_exact(k: TorusIndex, m: TorusIndex, n: TorusIndex) -> Result<SurdSum> {
    guards(k, m, n)?;
    let km = TorusIndex::new(k.k1 + m.k1, k.k2 + m.k2);
    let kn = TorusIndex::new(k.k1 + n.k1, k.k2 + n.k2);
    let mn = TorusIndex::new(m.k1 - n.k1, m.k2 - n.k2);
    let c = |a: TorusIndex, b: TorusIndex| a.cross(b) as i128;
    let norm = |a: TorusIndex| a.norm_sq() as u64;
    let t1 = SurdSum::quotient(c(m, n) + c(mn, k), norm(kn) * norm(km));
    let t2 = SurdSum::quotient(c(n, k), norm(k) * norm(kn));
    let t3 = SurdSum::quotient(c(k, m), norm(k) * norm(km));
    Ok(t1.add(&t2).add(&t3))
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `n = s² r` with `r` squarefree.
fn square_free_split(n: u64) -> (u64, u64) {
    let (mut s, mut r) = (1u64, 1u64);
    for (p, e) in factor(n) {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
    }
    (s, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: i64, b: i64) -> TorusIndex {
        TorusIndex::new(a, b)
    }

    #[test]
    fn zero_offsets_give_zero() {
        for k in [t(1, 0), t(-3, 7), t(2, 2)] {
            assert_eq!(rho(k, t(0, 0), t(0, 0)).unwrap(), 0.0);
            assert!(rho_exact(k, t(0, 0), t(0, 0)).unwrap().is_zero());
        }
    }

    #[test]
    fn guards_name_the_failing_denominator() {
        assert_eq!(rho(t(0, 0), t(1, 0), t(0, 1)), Err(Error::DegenerateKernel(KernelGuard::K)));
        assert_eq!(rho(t(1, 1), t(-1, -1), t(0, 1)), Err(Error::DegenerateKernel(KernelGuard::KPlusM)));
        assert_eq!(rho(t(1, 1), t(0, 1), t(-1, -1)), Err(Error::DegenerateKernel(KernelGuard::KPlusN)));
    }

    #[test]
    fn square_free_parts() {
        assert_eq!(square_free_split(72), (6, 2));
        assert_eq!(square_free_split(1), (1, 1));
        assert_eq!(square_free_split(45), (3, 5));
    }

    #[test]
    fn exact_agrees_with_float() {
        for (k, m, n) in [(t(1, 2), t(3, -1), t(-2, 5)), (t(4, 0), t(0, 3), t(1, 1))] {
            let a = rho(k, m, n).unwrap();
            let b = rho_exact(k, m, n).unwrap().to_f64();
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
            assert!((a - rho_phase(k, m, n)).abs() < 1e-14);
        }
    }
}
