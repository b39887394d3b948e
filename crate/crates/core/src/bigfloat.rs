//! Binary floating point with a per-value significand precision.
//!
//! Thin wrapper over `dashu`'s `FBig` with round-half-even. Binary
//! operations round to the larger of the two operand precisions, so a
//! computation started from inputs at `p` bits stays at `p` bits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu::base::{Abs, BitTest, Sign as DSign, SquareRoot, UnsignedAbs};
use dashu::float::round::mode::HalfEven;
use dashu::float::FBig;
use dashu::integer::{IBig, UBig};

use crate::scalar::{Rational, Real, Refinable, Scalar, Sign};
use crate::surd::Surd;

type Inner = FBig<HalfEven, 2>;

/// Floating point number carrying its own precision in bits.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigFloat(Inner);

impl BigFloat {
    pub fn zero(precision: usize) -> Self {
        BigFloat(Inner::ZERO.with_precision(precision.max(1)).value())
    }

    pub fn from_i64(v: i64, precision: usize) -> Self {
        BigFloat(Inner::from(v).with_precision(precision.max(1)).value())
    }

    pub fn from_integer(v: &IBig, precision: usize) -> Self {
        BigFloat(Inner::from(v.clone()).with_precision(precision.max(1)).value())
    }

    /// Finite `v` converts exactly when `precision >= 53`.
    ///
    /// Non-finite values saturate to signed infinities (NaN maps to zero,
    /// callers are expected to have rejected it).
    pub fn from_f64(v: f64, precision: usize) -> Self {
        let p = precision.max(1);
        match Inner::try_from(v) {
            Ok(f) => BigFloat(f.with_precision(p).value()),
            Err(_) if v == f64::INFINITY => BigFloat(Inner::INFINITY),
            Err(_) if v == f64::NEG_INFINITY => BigFloat(Inner::NEG_INFINITY),
            Err(_) => BigFloat::zero(p),
        }
    }

    pub fn from_rational(r: &Rational, precision: usize) -> Self {
        let p = precision.max(1);
        BigFloat(r.to_float::<HalfEven, 2>(p).value().with_precision(p).value())
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    /// Same value re-rounded (or re-tagged) to `precision` bits.
    pub fn with_precision(&self, precision: usize) -> Self {
        BigFloat(self.0.clone().with_precision(precision.max(1)).value())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Exact rational value; `None` for infinities.
    pub fn to_rational(&self) -> Option<Rational> {
        let repr = self.0.repr();
        if repr.is_infinite() {
            return None;
        }
        let sig = repr.significand().clone();
        let exp = repr.exponent();
        Some(if exp >= 0 {
            Rational::from(sig << exp as usize)
        } else {
            Rational::from_parts(sig, UBig::ONE << (-exp) as usize)
        })
    }

    pub fn sqrt(&self) -> Self {
        if self.0.repr().is_zero() {
            return self.clone();
        }
        BigFloat(self.0.sqrt())
    }

    pub fn abs(&self) -> Self {
        BigFloat(self.0.clone().abs())
    }

    /// `2^(1-p)` at this value's precision `p`.
    pub fn epsilon(&self) -> Self {
        let p = self.precision();
        BigFloat(Inner::from_parts(IBig::ONE, 1 - p as isize).with_precision(p).value())
    }

    /// `2^e` at the given precision.
    pub fn pow2(e: isize, precision: usize) -> Self {
        BigFloat(Inner::from_parts(IBig::ONE, e).with_precision(precision.max(1)).value())
    }

    pub fn is_infinite(&self) -> bool {
        self.0.repr().is_infinite()
    }

    /// Base-2 exponent estimate: `|x|` lies in `[2^(e-1), 2^e)` for nonzero `x`.
    pub fn log2_magnitude(&self) -> Option<isize> {
        let repr = self.0.repr();
        if repr.is_zero() || repr.is_infinite() {
            return None;
        }
        Some(repr.exponent() + repr.significand().unsigned_abs().bit_len() as isize)
    }

    fn sign_of(&self) -> Sign {
        match self.0.sign() {
            _ if self.0.repr().is_zero() => Sign::Zero,
            DSign::Positive => Sign::Positive,
            DSign::Negative => Sign::Negative,
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Decimal rendering with as many digits as the binary precision supports.
        if self.is_infinite() {
            return write!(f, "{}inf", if self.sign_of() == Sign::Negative { "-" } else { "" });
        }
        let digits = ((self.precision() as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize;
        write!(f, "{}", to_decimal_string(self, digits))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}b]", to_decimal_string(self, 20), self.precision())
    }
}

/// Scientific notation with `digits` significant decimal digits.
pub fn to_decimal_string(x: &BigFloat, digits: usize) -> String {
    let Some(r) = x.to_rational() else {
        return format!("{}", x.to_f64());
    };
    if r == Rational::ZERO {
        return "0".to_string();
    }
    let negative = r < Rational::ZERO;
    let mut r = if negative { -r } else { r };
    let ten = Rational::from(10);
    // Normalise into [1, 10).
    let mut exp10: i64 = 0;
    let est = x.log2_magnitude().unwrap_or(0) as f64 * std::f64::consts::LOG10_2;
    let shift = est.floor() as i64;
    if shift > 0 {
        r /= Rational::from(IBig::from(10u8).pow(shift as usize));
    } else if shift < 0 {
        r *= Rational::from(IBig::from(10u8).pow((-shift) as usize));
    }
    exp10 += shift;
    while r >= ten {
        r /= ten.clone();
        exp10 += 1;
    }
    while r < Rational::ONE {
        r *= ten.clone();
        exp10 -= 1;
    }
    let scale = IBig::from(10u8).pow(digits.saturating_sub(1));
    let scaled = r * Rational::from(scale.clone());
    // round half up on the scaled value
    let (num, den) = scaled.into_parts();
    let den = IBig::from(den);
    let mut q: IBig = (num.clone() * 2 + den.clone()) / (den * 2);
    if q >= scale.clone() * 10 {
        q /= 10;
        exp10 += 1;
    }
    let s = q.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mantissa = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
    format!("{}{}e{}", if negative { "-" } else { "" }, mantissa, exp10)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                BigFloat($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'a BigFloat) -> BigFloat {
                BigFloat($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Scalar for BigFloat {
    fn zero_like(&self) -> Self {
        BigFloat::zero(self.precision())
    }

    fn from_i64_like(&self, v: i64) -> Self {
        BigFloat::from_i64(v, self.precision())
    }

    fn from_integer_like(&self, v: &IBig) -> Self {
        BigFloat::from_integer(v, self.precision())
    }

    fn sign(&self) -> Sign {
        self.sign_of()
    }

    fn to_exact(&self) -> Option<Surd> {
        self.to_rational().map(Surd::from_rational)
    }

    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }

    fn is_finite(&self) -> bool {
        !self.is_infinite()
    }
}

impl Real for BigFloat {
    fn sqrt(&self) -> Self {
        BigFloat::sqrt(self)
    }

    fn abs(&self) -> Self {
        BigFloat::abs(self)
    }

    fn epsilon_like(&self) -> Self {
        self.epsilon()
    }

    fn from_f64_like(&self, v: f64) -> Self {
        BigFloat::from_f64(v, self.precision())
    }
}

impl Refinable for BigFloat {
    fn to_bigfloat(&self, precision: usize) -> BigFloat {
        self.with_precision(precision)
    }
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both are zero.
pub fn relative_difference(a: &BigFloat, b: &BigFloat) -> f64 {
    let scale = match a.abs().partial_cmp(&b.abs()) {
        Some(Ordering::Less) => b.abs(),
        _ => a.abs(),
    };
    if scale.sign() == Sign::Zero {
        return 0.0;
    }
    ((a - b).abs() / scale).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_propagates_through_ops() {
        let a = BigFloat::from_i64(2, 300);
        let b = BigFloat::from_i64(3, 300);
        let c = &a / &b;
        assert_eq!(c.precision(), 300);
        let back = c * BigFloat::from_i64(3, 300);
        assert!(relative_difference(&back, &a) < 1e-89);
    }

    #[test]
    fn sqrt_two_digits() {
        let s = BigFloat::from_i64(2, 200).sqrt();
        let sq = &s * &s;
        assert!(relative_difference(&sq, &BigFloat::from_i64(2, 200)) < 1e-59);
        assert!(to_decimal_string(&s, 20).starts_with("1.4142135623730950488"));
    }

    #[test]
    fn f64_round_trip_exact() {
        for v in [0.1, -3.75, 1e300, 5e-324] {
            let b = BigFloat::from_f64(v, 64);
            assert_eq!(b.to_f64(), v);
            assert_eq!(b.to_rational().unwrap(), crate::scalar::rational_from_f64(v).unwrap());
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&BigFloat::from_i64(-1250, 64), 5), "-1.25e3");
        assert_eq!(to_decimal_string(&BigFloat::from_f64(0.5, 64), 3), "5e-1");
        assert_eq!(to_decimal_string(&BigFloat::zero(64), 3), "0");
    }

    #[test]
    fn epsilon_matches_precision() {
        assert_eq!(BigFloat::from_i64(1, 53).epsilon().to_f64(), f64::EPSILON);
    }
}
