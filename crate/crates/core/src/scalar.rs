//! Scalar abstractions.
//!
//! [`Scalar`] is the minimal field interface the Charlier evaluators need and is
//! implemented for `f32`, `f64` and [`BigRational`]. Choosing the type chooses the
//! summation mode: floats use compensated summation, rationals sum exactly.
//!
//! [`Real`] adds the transcendental operations of [`num_traits::Float`] and is
//! what the special functions, the Hermite function and the convergence harness
//! are written against.

use std::fmt::{Debug, Display, LowerExp};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

/// Field element usable by the Charlier evaluators.
pub trait Scalar:
    Clone + Num + Signed + PartialOrd + FromPrimitive + Debug + Send + Sync + 'static
{
    /// Sum a sequence of terms; compensated for floats, exact for rationals.
    fn accurate_sum<I: IntoIterator<Item = Self>>(terms: I) -> Self;

    /// Square root, when it is representable in this type.
    fn exact_sqrt(&self) -> Option<Self>;

    /// `self^exponent`, when it is representable in this type.
    fn pow_scalar(&self, exponent: &Self) -> Option<Self>;

    fn ceil_i64(&self) -> Option<i64>;

    fn floor_i64(&self) -> Option<i64>;

    fn to_f64_lossy(&self) -> f64;

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type represents small integers")
    }

    fn from_u64_exact(v: u64) -> Self {
        Self::from_u64(v).expect("every scalar type represents small integers")
    }
}

/// Floating-point scalar (f32 or f64).
pub trait Real: Scalar + Float + FloatConst + Copy + Display + LowerExp {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into `T`.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 literal fits every Real type")
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn accurate_sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
                terms.into_iter().collect::<NeumaierSum<$t>>().value()
            }

            fn exact_sqrt(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }

            fn pow_scalar(&self, exponent: &Self) -> Option<Self> {
                Some(self.powf(*exponent))
            }

            fn ceil_i64(&self) -> Option<i64> {
                self.ceil().to_i64()
            }

            fn floor_i64(&self) -> Option<i64> {
                self.floor().to_i64()
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

fn exact_isqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

impl Scalar for BigRational {
    fn accurate_sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    fn exact_sqrt(&self) -> Option<Self> {
        let num = exact_isqrt(self.numer())?;
        let den = exact_isqrt(self.denom())?;
        Some(BigRational::new(num, den))
    }

    /// Only integer exponents are exact.
    fn pow_scalar(&self, exponent: &Self) -> Option<Self> {
        if !exponent.is_integer() {
            return None;
        }
        let e = exponent.to_integer().to_i32()?;
        if e < 0 && self.is_zero() {
            return None;
        }
        Some(num_traits::Pow::pow(self, e))
    }

    fn ceil_i64(&self) -> Option<i64> {
        self.ceil().to_integer().to_i64()
    }

    fn floor_i64(&self) -> Option<i64> {
        self.floor().to_integer().to_i64()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Parses a decimal literal such as `-12.5e-3` into the exact rational it denotes.
pub fn parse_decimal_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Inexact(format!("not a decimal literal: {text:?}"));
    let s = text.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Rational `p/q` from small integers.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// True when `v` is a non-positive integer (a pole of the gamma function).
#[inline]
pub(crate) fn is_nonpositive_integer<T: Real>(v: T) -> bool {
    v <= T::zero() && v == v.floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_decimal_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_decimal_rational("-2.50").unwrap(), ratio(-5, 2));
        assert_eq!(parse_decimal_rational("1e3").unwrap(), ratio(1000, 1));
        assert_eq!(parse_decimal_rational("12.5e-3").unwrap(), ratio(1, 80));
        assert_eq!(parse_decimal_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_decimal_rational("abc").is_err());
        assert!(parse_decimal_rational("").is_err());
        assert!(parse_decimal_rational("1.2.3").is_err());
    }

    #[test]
    fn rational_sqrt_only_for_squares() {
        assert_eq!(ratio(9, 4).exact_sqrt(), Some(ratio(3, 2)));
        assert_eq!(ratio(2, 1).exact_sqrt(), None);
        assert_eq!(ratio(-4, 1).exact_sqrt(), None);
        assert_eq!(4.0f64.exact_sqrt(), Some(2.0));
    }

    #[test]
    fn rational_powers() {
        assert_eq!(ratio(2, 3).pow_scalar(&ratio(2, 1)), Some(ratio(4, 9)));
        assert_eq!(ratio(2, 3).pow_scalar(&ratio(-1, 1)), Some(ratio(3, 2)));
        assert_eq!(ratio(2, 3).pow_scalar(&ratio(1, 2)), None);
        assert_eq!(ratio(0, 1).pow_scalar(&ratio(-1, 1)), None);
    }

    #[test]
    fn ceil_and_floor() {
        assert_eq!(ratio(7, 2).ceil_i64(), Some(4));
        assert_eq!(ratio(-7, 2).ceil_i64(), Some(-3));
        assert_eq!(ratio(7, 2).floor_i64(), Some(3));
        assert_eq!(3.5f64.ceil_i64(), Some(4));
        assert_eq!(f64::NAN.ceil_i64(), None);
    }

    #[test]
    fn pole_detection() {
        assert!(is_nonpositive_integer(0.0f64));
        assert!(is_nonpositive_integer(-3.0f64));
        assert!(!is_nonpositive_integer(-2.5f64));
        assert!(!is_nonpositive_integer(1.0f64));
    }
}
