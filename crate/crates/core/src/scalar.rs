//! Scalar backends.
//!
//! Two real backends share one comparison contract: [`Rational`] (exact,
//! arbitrary precision) and `f64` (relative tolerance [`FLOAT_TOLERANCE`]).
//! Gaussian rationals and complex floats ([`Complex`]) are used for spectral
//! splitting.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact backend scalar.
pub type Rational = BigRational;

/// Default relative tolerance of the float backend.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// A field element, real or complex.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for backends with decidable equality.
    const EXACT: bool;
    /// Tolerance used by [`Field::approx_eq`]; zero for exact backends.
    const TOLERANCE: f64;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// A cheap magnitude estimate, used for pivoting and tolerances.
    fn magnitude(&self) -> f64;

    fn is_one(&self) -> bool {
        (self.clone() - Self::one()).is_zero()
    }

    /// Equality per backend: exact, or `|a-b| <= tol * max(1,|a|,|b|)`.
    fn approx_eq(&self, other: &Self) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let scale = 1f64.max(self.magnitude()).max(other.magnitude());
        (self.clone() - other.clone()).magnitude() <= Self::TOLERANCE * scale
    }
}

/// A real scalar backend.
pub trait Scalar: Field + PartialOrd {
    fn from_ratio(n: i64, d: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Lossless for `f64`, binary-exact for rationals.
    fn from_f64(x: f64) -> Self;
    /// Square root, when it exists in the backend (perfect squares only for
    /// rationals). `None` for negative input.
    fn sqrt(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;
    /// Exact rational value (binary-exact for floats).
    fn to_rational(&self) -> Option<Rational>;

    fn is_negative(&self) -> bool {
        !self.is_zero() && *self < Self::zero()
    }
    fn is_positive(&self) -> bool {
        !self.is_zero() && *self > Self::zero()
    }
    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    /// Short display form: `p/q` for rationals, a decimal literal for floats.
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Option<Self>;
}

impl Field for Rational {
    const EXACT: bool = true;
    const TOLERANCE: f64 = 0.0;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(self).map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(Zero::zero)
    }
    fn sqrt(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }
    fn to_text(&self) -> String {
        if self.is_integer() {
            format!("{}", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if Zero::is_zero(&d) {
                    None
                } else {
                    Some(BigRational::new(n, d))
                }
            }
            None => match s.split_once('.') {
                Some((whole, frac)) if !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit()) => {
                    let negative = whole.starts_with('-');
                    let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
                        "" => BigInt::zero(),
                        w => w.parse().ok()?,
                    };
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    let magnitude = BigRational::new(whole * &scale + frac.parse::<BigInt>().ok()?, scale);
                    Some(if negative { -magnitude } else { magnitude })
                }
                Some(_) => None,
                None => Some(BigRational::from_integer(s.parse().ok()?)),
            },
        }
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    const TOLERANCE: f64 = FLOAT_TOLERANCE;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        f64::abs(*self) <= FLOAT_TOLERANCE
    }
    fn magnitude(&self) -> f64 {
        f64::abs(*self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> Option<Rational> {
        BigRational::from_float(*self)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn sqrt(&self) -> Option<Self> {
        if *self < -FLOAT_TOLERANCE {
            None
        } else {
            Some(f64::sqrt(self.max(0.0)))
        }
    }
    fn to_text(&self) -> String {
        format!("{self:?}")
    }
    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => Some(n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?),
            None => s.parse().ok(),
        }
    }
}

/// Complex number over a real backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }
    pub fn real(re: T) -> Self {
        Complex { re, im: T::zero() }
    }
    pub fn i() -> Self {
        Complex::new(T::zero(), T::one())
    }
    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl<T: Scalar> Add for Complex<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}
impl<T: Scalar> Sub for Complex<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}
impl<T: Scalar> Mul for Complex<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Complex::new(
            self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            self.re * o.im + self.im * o.re,
        )
    }
}
impl<T: Scalar> Div for Complex<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm_sqr();
        let p = self * o.conj();
        Complex::new(p.re / n.clone(), p.im / n)
    }
}
impl<T: Scalar> Neg for Complex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<T: Scalar> Field for Complex<T> {
    const EXACT: bool = T::EXACT;
    const TOLERANCE: f64 = T::TOLERANCE;

    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn one() -> Self {
        Complex::new(T::one(), T::zero())
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(T::from_i64(n), T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.re.magnitude() + self.im.magnitude()
    }
}

/// Square root of a complex number inside the backend, if it exists there.
pub fn csqrt<T: Scalar>(z: &Complex<T>) -> Option<Complex<T>> {
    let two = T::from_i64(2);
    let modulus = z.norm_sqr().sqrt()?;
    let x = ((modulus.clone() + z.re.clone()) / two.clone()).sqrt()?;
    if !x.is_zero() {
        let y = z.im.clone() / (two * x.clone());
        return Some(Complex::new(x, y));
    }
    let y = ((modulus - z.re.clone()) / two).sqrt()?;
    Some(Complex::new(x, y))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Continued-fraction rationalization of a float, bounded denominator.
/// Continued fraction convergents of `x` with denominator at most
/// `max_den`.
pub fn convergents(x: f64, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        out.push(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    convergents(x, max_den).into_iter().find(|c| (ToPrimitive::to_f64(c).unwrap_or(f64::NAN) - x).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_only_for_squares() {
        assert_eq!(rat(9, 4).sqrt(), Some(rat(3, 2)));
        assert_eq!(rat(2, 1).sqrt(), None);
        assert_eq!(rat(-1, 1).sqrt(), None);
    }

    #[test]
    fn float_equality_is_relative() {
        assert!(1e6f64.approx_eq(&(1e6 + 1e-4)));
        assert!(!1.0f64.approx_eq(&1.001));
    }

    #[test]
    fn gaussian_sqrt() {
        let z = Complex::new(rat(0, 1), rat(2, 1));
        let r = csqrt(&z).unwrap();
        assert_eq!(r.clone() * r, z);
        assert!(csqrt(&Complex::new(rat(2, 1), rat(0, 1))).is_none());
    }

    #[test]
    fn text_roundtrip() {
        let x = rat(-7, 3);
        assert_eq!(Rational::parse_text(&x.to_text()), Some(x));
        assert_eq!(Rational::parse_text("5"), Some(rat(5, 1)));
        assert_eq!(f64::parse_text("0.25"), Some(0.25));
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.6, 1000, 1e-12), Some(rat(3, 5)));
        assert_eq!(rationalize(-2.5, 1000, 1e-12), Some(rat(-5, 2)));
    }
}
