//! Probability weights.
//!
//! Every evaluator in this crate is generic over the scalar used for
//! probability masses. The exact instance is [`BigRational`]; `f64` and `f32`
//! are available for quick approximate runs and Monte-Carlo reporting.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Scalar type usable as a probability mass.
pub trait Weight:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic on this type is exact.
    const EXACT: bool;

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    /// `1 / 2^n`.
    fn dyadic(n: u32) -> Self;

    /// Converts the rational `num / den`. `den` must be non-zero.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// `self > 1`, allowing for rounding on inexact types.
    fn exceeds_one(&self) -> bool;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }
}

impl Weight for BigRational {
    const EXACT: bool = true;

    fn half() -> Self {
        BigRational::new(BigInt::one(), BigInt::from(2))
    }

    fn dyadic(n: u32) -> Self {
        BigRational::new(BigInt::one(), BigInt::one() << n)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn exceeds_one(&self) -> bool {
        *self > BigRational::one()
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

macro_rules! impl_float_weight {
    ($f:ty, $eps:expr) => {
        impl Weight for $f {
            const EXACT: bool = false;

            fn half() -> Self {
                0.5
            }

            fn dyadic(n: u32) -> Self {
                (2.0 as $f).powi(-(n as i32))
            }

            fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
                (num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN)) as $f
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn exceeds_one(&self) -> bool {
                *self > 1.0 + $eps
            }
        }
    };
}

impl_float_weight!(f64, 1e-9);
impl_float_weight!(f32, 1e-5);

/// Exact rational from two machine integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats an exact rational as `"num/den"` (always both parts).
pub fn format_ratio(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer into a reduced rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().ok()?;
    let den: BigInt = d.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_values() {
        assert_eq!(BigRational::dyadic(3), ratio(1, 8));
        assert_eq!(f64::dyadic(2), 0.25);
        assert_eq!(f32::dyadic(0), 1.0);
    }

    #[test]
    fn ratio_strings() {
        assert_eq!(format_ratio(&ratio(2, 4)), "1/2");
        assert_eq!(format_ratio(&ratio(0, 5)), "0/1");
        assert_eq!(parse_ratio("6/8"), Some(ratio(3, 4)));
        assert_eq!(parse_ratio("7"), Some(ratio(7, 1)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(parse_ratio("x/2"), None);
    }

    #[test]
    fn float_overflow_tolerance() {
        assert!(!(1.0f64 + 1e-12).exceeds_one());
        assert!(1.01f64.exceeds_one());
        assert!(ratio(101, 100).exceeds_one());
        assert!(!BigRational::one().exceeds_one());
    }
}
