use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

pub type Complex = num_complex::Complex64;

/// Coefficient field used by series, operators and chains.
///
/// Two implementations: [`Complex`] (floating) and [`GaussRational`] (exact).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    /// `None` when the value cannot be represented without rounding.
    fn from_complex(c: Complex) -> Option<Self>;
    fn to_complex(&self) -> Complex;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// A total order used only to canonicalize term lists.
    fn cmp_canonical(&self, other: &Self) -> Ordering;
}

impl Scalar for Complex {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn from_complex(c: Complex) -> Option<Self> {
        Some(c)
    }
    fn to_complex(&self) -> Complex {
        *self
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex::new(1.0, 0.0) / *self)
        }
    }
    fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re).then(self.im.total_cmp(&other.im))
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn from_fractions(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Self::new(re, im)
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for GaussRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
    fn from_i64(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
    fn from_complex(c: Complex) -> Option<Self> {
        // Only integers are accepted: anything else is presumed already rounded.
        let ok = |x: f64| x.is_finite() && x == x.trunc() && x.abs() < 9.0e15;
        if ok(c.re) && ok(c.im) {
            Some(Self::from_ints(c.re as i64, c.im as i64))
        } else {
            None
        }
    }
    fn to_complex(&self) -> Complex {
        Complex::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let den = &self.re * &self.re + &self.im * &self.im;
        Some(Self::new(&self.re / &den, -(&self.im / &den)))
    }
    fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}i", self.re, sign, self.im.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rational_field_ops() {
        let a = GaussRational::from_fractions((1, 2), (3, 4));
        let b = GaussRational::from_ints(2, -1);
        let p = a.clone() * b.clone();
        // (1/2 + 3/4 i)(2 - i) = 1 + 3/4 + (3/2 - 1/2) i
        assert_eq!(p, GaussRational::from_fractions((7, 4), (1, 1)));
        assert_eq!(a.clone() * a.inv().unwrap(), GaussRational::one());
        assert_eq!(a.conj().conj(), a);
        assert!(GaussRational::zero().inv().is_none());
    }

    #[test]
    fn from_complex_rejects_fractions() {
        assert!(GaussRational::from_complex(Complex::new(0.5, 0.0)).is_none());
        assert_eq!(
            GaussRational::from_complex(Complex::new(-3.0, 2.0)),
            Some(GaussRational::from_ints(-3, 2))
        );
    }

    #[test]
    fn display_forms() {
        use alloc::string::ToString;
        assert_eq!(GaussRational::from_fractions((-1, 4), (0, 1)).to_string(), "-1/4");
        assert_eq!(GaussRational::from_ints(1, -2).to_string(), "1 - 2i");
    }
}
