//! Scalar fields the rest of the crate is generic over.
//!
//! Two fields matter at runtime: double-precision complex numbers and exact
//! Gaussian rationals (complex numbers with arbitrary-precision rational
//! parts). Real `f64` and plain `BigRational` are supported as well so that
//! the generic kernels can be exercised on the simplest fields.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Relative tolerance for floating-point comparisons.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor below which floating-point values compare equal.
pub const ABS_FLOOR: f64 = 1e-12;

/// A field element usable by every kernel in the crate.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    /// `true` when arithmetic is exact, so equality tests are decidable.
    const EXACT: bool;
    /// Short human-readable name of the field.
    const NAME: &'static str;

    fn from_i64(v: i64) -> Self;

    /// Absolute value as `f64`, used for pivot selection and norms.
    fn magnitude(&self) -> f64;

    /// Equality for exact fields, tolerance comparison for floating ones.
    fn approx_eq(&self, other: &Self) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let diff = (self.clone() - other.clone()).magnitude();
        let scale = self.magnitude().max(other.magnitude());
        diff <= ABS_FLOOR.max(REL_TOL * scale)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

/// Exact fields carry a total order, which the Jordan machinery uses for
/// canonical block ordering.
pub trait ExactScalar: Scalar {
    fn canonical_cmp(&self, other: &Self) -> Ordering;
}

/// Double-precision complex numbers.
pub type C64 = Complex<f64>;
/// Arbitrary-precision rationals.
pub type Rational = BigRational;
/// Gaussian rationals: complex numbers with exact rational parts.
pub type GaussQ = Complex<BigRational>;

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "f64";

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;
    const NAME: &'static str = "cf64";

    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl ExactScalar for Rational {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Scalar for GaussQ {
    const EXACT: bool = true;
    const NAME: &'static str = "gq";

    fn from_i64(v: i64) -> Self {
        Complex::new(Rational::from_i64(v), BigRational::zero())
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }
}

impl ExactScalar for GaussQ {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

/// Builds a Gaussian rational from integer numerators and denominators.
pub fn gq(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussQ {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

/// A real integer as a Gaussian rational.
pub fn gqi(v: i64) -> GaussQ {
    GaussQ::from_i64(v)
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn format_fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`. The result is reduced to lowest terms
/// with a positive denominator.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |reason: &str| Error::parse(s.to_string(), reason.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = den.parse().map_err(|_| bad("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// `true` if the Gaussian rational is real and equal to one.
pub fn is_real_one(z: &GaussQ) -> bool {
    z.re.is_one() && z.im.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_are_reduced_with_positive_denominator() {
        let r = parse_fraction("6/-4").unwrap();
        assert_eq!(format_fraction(&r), "-3/2");
        assert_eq!(format_fraction(&parse_fraction("7").unwrap()), "7/1");
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
    }

    #[test]
    fn exact_addition_round_trips() {
        let a = gq(1, 3, -2, 7);
        let b = gq(5, 11, 1, 2);
        assert_eq!(a.clone() + b.clone() - b, a);
    }

    #[test]
    fn float_tolerance() {
        let a = C64::new(1.0, 0.0);
        assert!(a.approx_eq(&C64::new(1.0 + 1e-11, 0.0)));
        assert!(!a.approx_eq(&C64::new(1.0 + 1e-6, 0.0)));
        assert!(C64::new(0.0, 0.0).approx_eq(&C64::new(5e-13, 0.0)));
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        assert_eq!(gq(1, 1, 5, 1).canonical_cmp(&gq(2, 1, 0, 1)), Ordering::Less);
        assert_eq!(gq(1, 1, 0, 1).canonical_cmp(&gq(1, 1, 1, 2)), Ordering::Less);
    }
}
