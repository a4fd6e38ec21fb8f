//! Scalar abstraction shared by the polynomial and linear-algebra layers.
//!
//! Everything that decides a classification question runs over exact
//! rationals ([`crate::Q`]). `f64` is supported so that the same polynomial
//! and matrix code can drive the numeric witness search and plotting.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// A field element usable as a polynomial coefficient and matrix entry.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Signed + Send + Sync + 'static
{
    /// Whether arithmetic is exact. Rank and membership answers are only
    /// certificates when this is `true`.
    const EXACT: bool;

    /// Zero test used for pivoting. Exact types compare with zero; floating
    /// types use an absolute tolerance.
    fn is_negligible(&self) -> bool;

    /// Size used to pick pivots when arithmetic is inexact.
    fn magnitude(&self) -> f64;

    fn from_i64(v: i64) -> Self;

    fn from_rational(q: &BigRational) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-10
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Rational number from an `i64`.
pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Rational number `num/den`.
pub fn qr(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Best rational approximation of `v` with denominator at most `max_den`,
/// accepted only if it lies within `tol`.
pub fn snap_rational(v: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    let mut best: Option<(f64, i64, i64)> = None;
    for den in 1..=max_den {
        let num = (v * den as f64).round();
        let err = (v - num / den as f64).abs();
        if err <= tol && best.map_or(true, |(e, _, _)| err < e - 1e-15) {
            best = Some((err, num as i64, den));
        }
    }
    best.map(|(_, n, d)| qr(n, d))
}

/// Square root of a rational if it is a perfect square.
pub fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_finds_small_denominators() {
        assert_eq!(snap_rational(0.5000000001, 8, 1e-6), Some(qr(1, 2)));
        assert_eq!(snap_rational(-1.0, 8, 1e-6), Some(q(-1)));
        assert_eq!(snap_rational(0.123456, 8, 1e-9), None);
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&qr(9, 4)), Some(qr(3, 2)));
        assert_eq!(rational_sqrt(&q(2)), None);
        assert_eq!(rational_sqrt(&q(-4)), None);
    }

    #[test]
    fn conversions() {
        assert_eq!(<f64 as Scalar>::from_rational(&qr(3, 8)), 0.375);
        assert_eq!(BigRational::from_rational(&qr(-7, 3)), qr(-7, 3));
    }
}
