//! Number types the engine can run on.
//!
//! Every algorithm in the crate is written against [`Scalar`]. The exact
//! instantiation ([`BigRational`]) is the reference one: all published values
//! are small fractions and reproduce with plain equality. The floating point
//! instantiations compare with a type-specific tolerance instead.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Failure to read a number literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number literal {0:?}")]
pub struct ParseScalarError(pub String);

/// Field-like number type used for masses, beliefs and probabilities.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + Sum
    + Send
    + Sync
    + 'static
{
    /// `num / den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// True when the value is indistinguishable from zero: exactly zero for
    /// exact types, within a small absolute tolerance for floats.
    fn is_negligible(&self) -> bool;

    /// Parses `"3"`, `"-0.25"`, `"1e-2"` or `"2/3"`.
    fn parse_literal(text: &str) -> Result<Self, ParseScalarError>;

    /// Canonical textual form; [`Scalar::parse_literal`] reads it back to the
    /// same value.
    fn to_literal(&self) -> String;

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_negligible()
    }

    fn is_positive(&self) -> bool {
        !self.is_negligible() && *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        !self.is_negligible() && *self < Self::zero()
    }

    /// `self <= other` up to the type's tolerance.
    fn le_approx(&self, other: &Self) -> bool {
        self <= other || self.approx_eq(other)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

/// Splits a literal into an optional `num/den` pair of sub-literals.
fn split_ratio(text: &str) -> Option<(&str, &str)> {
    let (num, den) = text.split_once('/')?;
    Some((num.trim(), den.trim()))
}

const MAX_DECIMAL_EXPONENT: i32 = 1000;

/// Exact value of a decimal literal such as `-12.5e-3`.
fn parse_decimal_exact(text: &str) -> Result<BigRational, ParseScalarError> {
    let err = || ParseScalarError(text.to_string());
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| err())?;
            if exp.abs() > MAX_DECIMAL_EXPONENT {
                return Err(err());
            }
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| err())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn parse_literal(text: &str) -> Result<Self, ParseScalarError> {
        match split_ratio(text) {
            Some((num, den)) => {
                let err = || ParseScalarError(text.to_string());
                let num = parse_decimal_exact(num)?;
                let den = parse_decimal_exact(den)?;
                if den.is_zero() {
                    return Err(err());
                }
                Ok(num / den)
            }
            None => parse_decimal_exact(text),
        }
    }

    fn to_literal(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                assert!(den != 0, "zero denominator");
                num as $t / den as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_negligible(&self) -> bool {
                self.abs() <= $tol
            }

            fn parse_literal(text: &str) -> Result<Self, ParseScalarError> {
                let err = || ParseScalarError(text.to_string());
                let value = match split_ratio(text) {
                    Some((num, den)) => {
                        let num = <$t>::from_str(num).map_err(|_| err())?;
                        let den = <$t>::from_str(den).map_err(|_| err())?;
                        if den == 0.0 {
                            return Err(err());
                        }
                        num / den
                    }
                    None => <$t>::from_str(text.trim()).map_err(|_| err())?,
                };
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(err())
                }
            }

            fn to_literal(&self) -> String {
                format!("{self}")
            }
        }
    };
}

impl_float_scalar!(f64, 1e-9);
impl_float_scalar!(f32, 1e-5);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn rational_literals() {
        assert_eq!(BigRational::parse_literal("1/3").unwrap(), q(1, 3));
        assert_eq!(BigRational::parse_literal(" 2 / 6 ").unwrap(), q(1, 3));
        assert_eq!(BigRational::parse_literal("0.25").unwrap(), q(1, 4));
        assert_eq!(BigRational::parse_literal("-1.5").unwrap(), q(-3, 2));
        assert_eq!(BigRational::parse_literal("1e-2").unwrap(), q(1, 100));
        assert_eq!(BigRational::parse_literal("2.5E1").unwrap(), q(25, 1));
        assert_eq!(BigRational::parse_literal(".5").unwrap(), q(1, 2));
        assert_eq!(BigRational::parse_literal("1").unwrap(), q(1, 1));
        for bad in ["1e100000", "", "abc", "1/0", "1//2", "1.2.3", "--1", "."] {
            assert!(BigRational::parse_literal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rational_literal_form() {
        assert_eq!(q(1, 3).to_literal(), "1/3");
        assert_eq!(q(4, 2).to_literal(), "2");
        assert_eq!(q(-2, 6).to_literal(), "-1/3");
        assert_eq!(q(0, 5).to_literal(), "0");
    }

    #[test]
    fn float_literals() {
        assert!((f64::parse_literal("1/3").unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f64::parse_literal("0.5").unwrap(), 0.5);
        assert!(f64::parse_literal("inf").is_err());
        assert!(f32::parse_literal("1/0").is_err());
        let x = 0.1f64 + 0.2;
        assert_eq!(f64::parse_literal(&x.to_literal()).unwrap(), x);
    }

    #[test]
    fn tolerance_is_type_specific() {
        assert!((1e-12f64).is_negligible());
        assert!(!(1e-6f64).is_negligible());
        assert!((1e-6f32).is_negligible());
        assert!(!q(1, 1_000_000_000_000).is_negligible());
        assert!(Scalar::is_positive(&q(1, 3)));
        assert!(!Scalar::is_positive(&1e-12f64));
        assert!((0.3f64).approx_eq(&(0.1 + 0.2)));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rational_literal_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = q(n, d);
            prop_assert_eq!(BigRational::parse_literal(&x.to_literal()).unwrap(), x);
        }
    }
}
