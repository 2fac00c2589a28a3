//! Exact coefficients in the ring ℚ(i, √2).
//!
//! Every structure constant of io(2) is an integer, and the change of basis
//! between (X, D) and (a†, a) only introduces 1/√2, so all coefficients that
//! ever appear in the symbolic engine live here. Equality is exact and
//! decidable, which is what makes canonical forms comparable.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::real::Real;

/// A rational field usable as the base of [`ExactScalar`].
pub trait ExactField:
    Clone + PartialEq + fmt::Debug + fmt::Display + Signed + ToPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self;
    fn from_frac(num: i64, den: i64) -> Self;
    fn is_integral(&self) -> bool;
    /// Multiplies by an arbitrary-size integer.
    fn scale_big(&self, k: &BigInt) -> Self;
}

impl ExactField for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_frac(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
    fn scale_big(&self, k: &BigInt) -> Self {
        self * BigRational::from_integer(k.clone())
    }
}

impl ExactField for Rational64 {
    fn from_int(v: i64) -> Self {
        Rational64::from_integer(v)
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
    fn scale_big(&self, k: &BigInt) -> Self {
        let k = k.to_i64().expect("integer factor overflows i64 rational");
        self * Rational64::from_integer(k)
    }
}

/// `re + im·i + re_s2·√2 + im_s2·i·√2` with each part in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar<T> {
    pub re: T,
    pub im: T,
    pub re_s2: T,
    pub im_s2: T,
}

impl<T: ExactField> ExactScalar<T> {
    pub fn new(re: T, im: T, re_s2: T, im_s2: T) -> Self {
        Self { re, im, re_s2, im_s2 }
    }

    pub fn from_rational(q: T) -> Self {
        Self::new(q, T::zero(), T::zero(), T::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(T::from_int(v))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(T::from_frac(num, den))
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn sqrt2() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Self::new(T::zero(), T::zero(), T::from_frac(1, 2), T::zero())
    }

    pub fn parts(&self) -> [&T; 4] {
        [&self.re, &self.im, &self.re_s2, &self.im_s2]
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&T> {
        (self.im.is_zero() && self.re_s2.is_zero() && self.im_s2.is_zero()).then_some(&self.re)
    }

    pub fn scale(&self, q: &T) -> Self {
        Self::new(
            self.re.clone() * q.clone(),
            self.im.clone() * q.clone(),
            self.re_s2.clone() * q.clone(),
            self.im_s2.clone() * q.clone(),
        )
    }

    pub fn scale_big(&self, k: &BigInt) -> Self {
        Self::new(
            self.re.scale_big(k),
            self.im.scale_big(k),
            self.re_s2.scale_big(k),
            self.im_s2.scale_big(k),
        )
    }

    /// Complex conjugation (i ↦ −i); √2 is real and fixed.
    pub fn conj(&self) -> Self {
        Self::new(
            self.re.clone(),
            -self.im.clone(),
            self.re_s2.clone(),
            -self.im_s2.clone(),
        )
    }

    /// The Galois conjugate √2 ↦ −√2.
    fn conj_sqrt2(&self) -> Self {
        Self::new(
            self.re.clone(),
            self.im.clone(),
            -self.re_s2.clone(),
            -self.im_s2.clone(),
        )
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // z·σ(z) lies in ℚ(i); invert that by its complex conjugate.
        let w = self.clone() * self.conj_sqrt2();
        let norm = w.re.clone() * w.re.clone() + w.im.clone() * w.im.clone();
        let w_inv = Self::new(w.re.clone() / norm.clone(), -w.im.clone() / norm, T::zero(), T::zero());
        Some(self.conj_sqrt2() * w_inv)
    }

    pub fn to_complex<F: Real>(&self) -> Complex<F> {
        let f = |q: &T| q.to_f64().expect("rational converts to f64");
        let s2 = std::f64::consts::SQRT_2;
        let re = f(&self.re) + f(&self.re_s2) * s2;
        let im = f(&self.im) + f(&self.im_s2) * s2;
        Complex::new(F::lit(re), F::lit(im))
    }

    /// Number of nonzero components.
    pub fn support(&self) -> usize {
        self.parts().iter().filter(|p| !p.is_zero()).count()
    }
}

impl<T: ExactField> Zero for ExactScalar<T> {
    fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }
    fn is_zero(&self) -> bool {
        self.parts().iter().all(|p| p.is_zero())
    }
}

impl<T: ExactField> One for ExactScalar<T> {
    fn one() -> Self {
        Self::from_rational(T::one())
    }
}

impl<T: ExactField> Add for ExactScalar<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.re + rhs.re,
            self.im + rhs.im,
            self.re_s2 + rhs.re_s2,
            self.im_s2 + rhs.im_s2,
        )
    }
}

impl<T: ExactField> Sub for ExactScalar<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: ExactField> Neg for ExactScalar<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im, -self.re_s2, -self.im_s2)
    }
}

impl<T: ExactField> Mul for ExactScalar<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let two = T::from_int(2);
        let (a0, a1, a2, a3) = (self.re, self.im, self.re_s2, self.im_s2);
        let (b0, b1, b2, b3) = (rhs.re, rhs.im, rhs.re_s2, rhs.im_s2);
        // i² = −1, (√2)² = 2, (i√2)² = −2, i·(i√2) = −√2, √2·(i√2) = 2i
        let re = a0.clone() * b0.clone() - a1.clone() * b1.clone()
            + two.clone() * (a2.clone() * b2.clone() - a3.clone() * b3.clone());
        let im = a0.clone() * b1.clone()
            + a1.clone() * b0.clone()
            + two * (a2.clone() * b3.clone() + a3.clone() * b2.clone());
        let re_s2 =
            a0.clone() * b2.clone() + a2.clone() * b0.clone() - (a1.clone() * b3.clone() + a3.clone() * b1.clone());
        let im_s2 = a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1;
        Self::new(re, im, re_s2, im_s2)
    }
}

impl<T: ExactField> Div for ExactScalar<T> {
    type Output = Self;
    /// Panics on division by zero, like the rational types underneath.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero scalar")
    }
}

impl<T: ExactField> AddAssign for ExactScalar<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = std::mem::replace(self, Self::zero()) + rhs;
    }
}

impl<T: ExactField> SubAssign for ExactScalar<T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = std::mem::replace(self, Self::zero()) - rhs;
    }
}

impl<T: ExactField> MulAssign for ExactScalar<T> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = std::mem::replace(self, Self::zero()) * rhs;
    }
}

impl<'a, T: ExactField> Mul<&'a ExactScalar<T>> for &'a ExactScalar<T> {
    type Output = ExactScalar<T>;
    fn mul(self, rhs: &ExactScalar<T>) -> ExactScalar<T> {
        self.clone() * rhs.clone()
    }
}

/// Writes `q·unit` in the canonical text form, unit being `""`, `i`, `s2` or `i*s2`.
/// Returns the sign separately so callers can fold it into a `+`/`-` joiner.
pub(crate) fn fmt_rational_times<T: ExactField>(q: &T, unit: &str) -> (bool, String) {
    let negative = q.is_negative();
    let mag = q.abs();
    let body = if unit.is_empty() {
        mag.to_string()
    } else if mag.is_one() {
        unit.to_string()
    } else if mag.is_integral() {
        format!("{mag}*{unit}")
    } else {
        format!("({mag})*{unit}")
    };
    (negative, body)
}

const UNITS: [&str; 4] = ["", "i", "s2", "i*s2"];

/// Signed pieces of the sum form of `c`, one per nonzero part.
pub(crate) fn scalar_pieces<T: ExactField>(c: &ExactScalar<T>) -> Vec<(bool, String)> {
    c.parts()
        .into_iter()
        .zip(UNITS)
        .filter(|(part, _)| !part.is_zero())
        .map(|(part, unit)| fmt_rational_times(part, unit))
        .collect()
}

/// Writes `c*tail`, parenthesizing `c` when it has several parts or a fraction.
pub(crate) fn fmt_scaled<T: ExactField>(c: &ExactScalar<T>, tail: &str) -> (bool, String) {
    if c.support() != 1 {
        return (false, format!("({c})*{tail}"));
    }
    let (slot, part) = c
        .parts()
        .into_iter()
        .enumerate()
        .find(|(_, p)| !p.is_zero())
        .expect("one part");
    let (neg, coeff) = fmt_rational_times(part, UNITS[slot]);
    let coeff = if slot == 0 && coeff.contains('/') {
        format!("({coeff})")
    } else {
        coeff
    };
    let body = if coeff == "1" {
        tail.to_string()
    } else {
        format!("{coeff}*{tail}")
    };
    (neg, body)
}

/// Joins signed pieces as `a + b - c`; an empty list prints `0`.
pub(crate) fn write_signed(
    f: &mut fmt::Formatter<'_>,
    pieces: impl IntoIterator<Item = (bool, String)>,
) -> fmt::Result {
    let mut first = true;
    for (neg, body) in pieces {
        match (first, neg) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl<T: ExactField> fmt::Display for ExactScalar<T> {
    /// Sum form, e.g. `1/2 + i - 3*s2`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed(f, scalar_pieces(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_frac(n, d)
    }

    #[test]
    fn unit_relations() {
        let i = Scalar::i();
        let s = Scalar::sqrt2();
        assert_eq!(i.clone() * i.clone(), -Scalar::one());
        assert_eq!(s.clone() * s.clone(), Scalar::from_int(2));
        let is = i.clone() * s.clone();
        assert_eq!(is.clone() * is.clone(), Scalar::from_int(-2));
        assert_eq!(i * is.clone(), -s.clone());
        assert_eq!(s * is, Scalar::from_int(2) * Scalar::i());
    }

    #[test]
    fn inverse_of_sqrt2_is_half_sqrt2() {
        assert_eq!(Scalar::sqrt2().inverse().unwrap(), Scalar::inv_sqrt2());
        assert!(Scalar::zero().inverse().is_none());
    }

    #[test]
    fn general_inverse() {
        let z = Scalar::new(
            BigRational::from_frac(3, 7),
            BigRational::from_frac(-1, 2),
            BigRational::from_int(5),
            BigRational::from_frac(2, 3),
        );
        assert_eq!(z.clone() * z.inverse().unwrap(), Scalar::one());
    }

    #[test]
    fn lowest_terms_are_kept() {
        let a = q(2, 4) + q(1, 4);
        assert_eq!(a.re, BigRational::from_frac(3, 4));
        assert_eq!(q(6, -8).re, BigRational::from_frac(-3, 4));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(q(1, 2).to_string(), "1/2");
        assert_eq!(q(-3, 1).to_string(), "-3");
        assert_eq!(Scalar::inv_sqrt2().to_string(), "(1/2)*s2");
        let z = q(1, 2) + Scalar::i() - Scalar::from_int(3) * Scalar::sqrt2();
        assert_eq!(z.to_string(), "1/2 + i - 3*s2");
    }

    #[test]
    fn float_conversion() {
        let z = Scalar::inv_sqrt2() + Scalar::i() * q(1, 4);
        let c = z.to_complex::<f64>();
        assert!((c.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((c.im - 0.25).abs() < 1e-16);
    }

    #[test]
    fn small_rational_backend() {
        type S64 = ExactScalar<Rational64>;
        let h = S64::inv_sqrt2();
        assert_eq!(h.clone() * h, S64::from_frac(1, 2));
    }
}
