//! Scalar domains.
//!
//! Every algorithm in this crate is generic over [`Scalar`], so the choice of
//! arithmetic (machine binary64, exact rationals, configurable-precision
//! floats, exact surds, or the instrumented wrapper used by the tests) is a
//! type parameter. [`ScalarDomain`] names the three user-facing domains for
//! runtime selection.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu::base::Signed;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;

use crate::bigfloat::BigFloat;
use crate::surd::Surd;

/// Exact rational numbers with arbitrary-size numerator and denominator.
pub type Rational = RBig;

/// Unit roundoff of binary64.
pub const UNIT_ROUNDOFF: f64 = 1.1102230246251565e-16;

/// Sign of a scalar value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Runtime name of an arithmetic instantiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarDomain {
    Binary64,
    Rational,
    /// Floating point rounded to the given number of significand bits.
    BigFloat(usize),
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::Binary64 => write!(f, "binary64"),
            ScalarDomain::Rational => write!(f, "rational"),
            ScalarDomain::BigFloat(bits) => write!(f, "bigfloat({bits})"),
        }
    }
}

/// Field arithmetic shared by every domain.
///
/// Constants are produced from an existing value (`zero_like`, `one_like`,
/// ...) so that precision-carrying domains hand out constants at the right
/// precision.
#[allow(clippy::wrong_self_convention)]
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn from_integer_like(&self, v: &IBig) -> Self;
    fn sign(&self) -> Sign;
    /// Exact value of `self`, or `None` when it is not a finite number.
    fn to_exact(&self) -> Option<Surd>;
    fn to_f64(&self) -> f64;

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }

    fn is_zero(&self) -> bool {
        self.sign() == Sign::Zero
    }

    fn is_finite(&self) -> bool {
        true
    }
}

/// Ordered domains with square roots, used by the dense iterative kernels.
#[allow(clippy::wrong_self_convention)]
pub trait Real: Scalar + PartialOrd {
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    /// Relative spacing of the format at this value's precision.
    fn epsilon_like(&self) -> Self;
    fn from_f64_like(&self, v: f64) -> Self;
}

/// Values that can be re-evaluated at any binary precision.
///
/// This is what the certified routes need: they rebuild the same input at a
/// ladder of precisions and watch the results converge.
pub trait Refinable: Scalar {
    fn to_bigfloat(&self, precision: usize) -> BigFloat;
}

/// Exact rational value of a finite binary64 number.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    if v == 0.0 {
        return Some(Rational::ZERO);
    }
    let bits = v.to_bits();
    let negative = bits >> 63 == 1;
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let mut num = IBig::from(mantissa);
    if negative {
        num = -num;
    }
    Some(if exp >= 0 {
        Rational::from(num << exp as usize)
    } else {
        Rational::from_parts(num, UBig::ONE << (-exp) as usize)
    })
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }

    fn from_i64_like(&self, v: i64) -> Self {
        v as f64
    }

    fn from_integer_like(&self, v: &IBig) -> Self {
        v.to_f64().value()
    }

    fn sign(&self) -> Sign {
        if *self > 0.0 {
            Sign::Positive
        } else if *self < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn to_exact(&self) -> Option<Surd> {
        rational_from_f64(*self).map(Surd::from_rational)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Real for f64 {
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn epsilon_like(&self) -> Self {
        f64::EPSILON
    }

    fn from_f64_like(&self, v: f64) -> Self {
        v
    }
}

impl Refinable for f64 {
    fn to_bigfloat(&self, precision: usize) -> BigFloat {
        BigFloat::from_f64(*self, precision)
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::ZERO
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Rational::from(v)
    }

    fn from_integer_like(&self, v: &IBig) -> Self {
        Rational::from(v.clone())
    }

    fn sign(&self) -> Sign {
        if *self == Rational::ZERO {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn to_exact(&self) -> Option<Surd> {
        Some(Surd::from_rational(self.clone()))
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self).value()
    }
}

impl Refinable for Rational {
    fn to_bigfloat(&self, precision: usize) -> BigFloat {
        BigFloat::from_rational(self, precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_to_rational_is_exact() {
        assert_eq!(rational_from_f64(0.5).unwrap(), Rational::from_parts(1.into(), 2u8.into()));
        assert_eq!(rational_from_f64(-3.0).unwrap(), Rational::from(-3));
        let tiny = rational_from_f64(f64::MIN_POSITIVE / 4.0).unwrap();
        assert_eq!(tiny.to_f64().value(), f64::MIN_POSITIVE / 4.0);
        assert!(rational_from_f64(f64::NAN).is_none());
        let r = rational_from_f64(0.1).unwrap();
        assert_ne!(r, Rational::from_parts(1.into(), 10u8.into()));
        assert_eq!(Rational::to_f64(&r).value(), 0.1);
    }

    #[test]
    fn signs() {
        assert_eq!(Scalar::sign(&-2.0f64), Sign::Negative);
        assert_eq!(Scalar::sign(&0.0f64), Sign::Zero);
        assert_eq!(Scalar::sign(&Rational::from(5)), Sign::Positive);
        assert_eq!(Sign::Negative.flip(), Sign::Positive);
    }
}
