//! Exact arithmetic in the field generated over the rationals by square roots
//! of integers.
//!
//! A [`Surd`] is stored in canonical form `sum_s q_s * sqrt(s)` with distinct
//! squarefree radicands `s` and nonzero rational coefficients. Square roots of
//! distinct squarefree integers are linearly independent over the rationals,
//! so structural equality is value equality and zero tests are exact. Signs
//! and binary approximations come from integer interval bounds that are
//! refined until they decide.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu::base::{Gcd, SquareRoot, UnsignedAbs};
use dashu::integer::{IBig, UBig};

use crate::bigfloat::BigFloat;
use crate::scalar::{Rational, Refinable, Scalar, Sign};

/// Largest integer accepted by [`Surd::sqrt_of`]; radicands are factored by
/// trial division.
pub const MAX_RADICAND: u64 = 1_000_000_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: BTreeMap<u64, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurdError {
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("radicand {0} exceeds the supported bound {MAX_RADICAND}")]
    RadicandTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `k = a^2 * s` with `s` squarefree.
fn split_square(mut k: u64) -> (u64, u64) {
    let mut a = 1u64;
    let mut s = 1u64;
    let mut p = 2u64;
    while p * p <= k {
        let mut e = 0;
        while k.is_multiple_of(p) {
            k /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            a *= p;
        }
        if e % 2 == 1 {
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (a, s * k)
}

fn smallest_prime_factor(k: u64) -> u64 {
    let mut p = 2u64;
    while p * p <= k {
        if k.is_multiple_of(p) {
            return p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    k
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if q != Rational::ZERO {
            terms.insert(1, q);
        }
        Surd { terms }
    }

    pub fn from_i64(v: i64) -> Self {
        Surd::from_rational(Rational::from(v))
    }

    /// `sqrt(k)` for a nonnegative integer `k <= MAX_RADICAND`.
    pub fn sqrt_of(k: i64) -> Result<Self, SurdError> {
        if k < 0 {
            return Err(SurdError::NegativeRadicand);
        }
        let k = k as u64;
        if k > MAX_RADICAND {
            return Err(SurdError::RadicandTooLarge(k));
        }
        if k == 0 {
            return Ok(Surd::zero());
        }
        let (a, s) = split_square(k);
        let mut terms = BTreeMap::new();
        terms.insert(s, Rational::from(a));
        Ok(Surd { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::ZERO),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<IBig> {
        let q = self.as_rational()?;
        if *q.denominator() == UBig::ONE {
            Some(q.numerator().clone())
        } else {
            None
        }
    }

    /// Terms as `(radicand, coefficient)` pairs in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(s, q)| (*s, q))
    }

    fn add_term(&mut self, s: u64, q: Rational) {
        if q == Rational::ZERO {
            return;
        }
        let entry = self.terms.entry(s).or_insert(Rational::ZERO);
        *entry = entry.clone() + q;
        if *entry == Rational::ZERO {
            self.terms.remove(&s);
        }
    }

    fn mul_ref(&self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (s1, q1) in &self.terms {
            for (s2, q2) in &rhs.terms {
                let g = gcd_u64(*s1, *s2);
                let s = (s1 / g).checked_mul(s2 / g).expect("radicand overflow in surd product");
                out.add_term(s, q1.clone() * q2.clone() * Rational::from(g));
            }
        }
        out
    }

    fn scale(&self, q: &Rational) -> Surd {
        let mut out = Surd::zero();
        for (s, c) in &self.terms {
            out.add_term(*s, c.clone() * q.clone());
        }
        out
    }

    /// Image under the field automorphism `sqrt(p) -> -sqrt(p)`.
    fn conjugate_at(&self, p: u64) -> Surd {
        let terms = self
            .terms
            .iter()
            .map(|(s, q)| (*s, if s % p == 0 { -q.clone() } else { q.clone() }))
            .collect();
        Surd { terms }
    }

    pub fn checked_div(&self, rhs: &Surd) -> Result<Surd, SurdError> {
        if rhs.is_zero() {
            return Err(SurdError::DivisionByZero);
        }
        let mut num = self.clone();
        let mut den = rhs.clone();
        // Rationalise the denominator one prime at a time: d * conj_p(d) is
        // fixed by the automorphism at p, so sqrt(p) disappears from it.
        while den.as_rational().is_none() {
            let s = *den.terms.keys().find(|s| **s != 1).expect("irrational part present");
            let p = smallest_prime_factor(s);
            let c = den.conjugate_at(p);
            num = num.mul_ref(&c);
            den = den.mul_ref(&c);
        }
        let d = den.as_rational().expect("rational after rationalisation");
        Ok(num.scale(&(Rational::ONE / d)))
    }

    /// Integer bounds `(lo, hi, scale)` with `lo / scale <= self <= hi / scale`,
    /// where `scale = D * 2^bits` and the interval width is at most `sum |Q_s| / scale`.
    fn bounds(&self, bits: usize) -> (IBig, IBig, IBig) {
        let mut den = UBig::ONE;
        for q in self.terms.values() {
            let d = q.denominator();
            let g = den.clone().gcd(d);
            den = den.clone() * (d.clone() / g);
        }
        let den_i = IBig::from(den.clone());
        let mut lo = IBig::ZERO;
        let mut hi = IBig::ZERO;
        for (s, q) in &self.terms {
            let coeff = q.numerator().clone() * (den_i.clone() / IBig::from(q.denominator().clone()));
            if *s == 1 {
                let exact = coeff << bits;
                lo += exact.clone();
                hi += exact;
            } else {
                let r = IBig::from((UBig::from(*s) << (2 * bits)).sqrt());
                if coeff > IBig::ZERO {
                    lo += coeff.clone() * r.clone();
                    hi += coeff * (r + IBig::ONE);
                } else {
                    lo += coeff.clone() * (r.clone() + IBig::ONE);
                    hi += coeff * r;
                }
            }
        }
        (lo, hi, den_i << bits)
    }

    pub fn sign(&self) -> Sign {
        if self.terms.is_empty() {
            return Sign::Zero;
        }
        if let Some(q) = self.as_rational() {
            return Scalar::sign(&q);
        }
        let mut bits = 64;
        loop {
            let (lo, hi, _) = self.bounds(bits);
            if lo > IBig::ZERO {
                return Sign::Positive;
            }
            if hi < IBig::ZERO {
                return Sign::Negative;
            }
            bits *= 2;
        }
    }

    pub fn cmp_value(&self, other: &Surd) -> Ordering {
        match (self.clone() - other.clone()).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Surd {
        if self.sign() == Sign::Negative {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Binary approximation with relative error below `2^-(precision + 1)`
    /// before the final rounding to `precision` bits.
    pub fn to_bigfloat(&self, precision: usize) -> BigFloat {
        if let Some(q) = self.as_rational() {
            return BigFloat::from_rational(&q, precision);
        }
        let mut bits = precision + 64;
        loop {
            let (lo, hi, scale) = self.bounds(bits);
            let same_sign = (lo > IBig::ZERO) || (hi < IBig::ZERO);
            if same_sign {
                let width = hi.clone() - lo.clone();
                let mag = if lo > IBig::ZERO { lo.clone() } else { -hi.clone() };
                if width << (precision + 2) <= mag {
                    let mid = Rational::from_parts(lo + hi, (scale * IBig::from(2)).unsigned_abs());
                    return BigFloat::from_rational(&mid, precision);
                }
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_bigfloat(64).to_f64()
    }
}

impl fmt::Display for Surd {
    /// Renders in the parameter syntax accepted by the family parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, q) in &self.terms {
            let negative = *q < Rational::ZERO;
            let mag = if negative { -q.clone() } else { q.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            }
            first = false;
            if *s == 1 {
                write!(f, "{}", mag)?;
            } else if mag == Rational::ONE {
                write!(f, "sqrt({s})")?;
            } else {
                write!(f, "{}*sqrt({s})", mag)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(mut self, rhs: Surd) -> Surd {
        for (s, q) in rhs.terms {
            self.add_term(s, q);
        }
        self
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        self.mul_ref(&rhs)
    }
}

impl Div for Surd {
    type Output = Surd;
    /// Panics on division by zero; use [`Surd::checked_div`] otherwise.
    fn div(self, rhs: Surd) -> Surd {
        self.checked_div(&rhs).expect("surd division by zero")
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { terms: self.terms.into_iter().map(|(s, q)| (s, -q)).collect() }
    }
}

impl Scalar for Surd {
    fn zero_like(&self) -> Self {
        Surd::zero()
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Surd::from_i64(v)
    }

    fn from_integer_like(&self, v: &IBig) -> Self {
        Surd::from_rational(Rational::from(v.clone()))
    }

    fn sign(&self) -> Sign {
        Surd::sign(self)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn to_exact(&self) -> Option<Surd> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        Surd::to_f64(self)
    }
}

impl Refinable for Surd {
    fn to_bigfloat(&self, precision: usize) -> BigFloat {
        Surd::to_bigfloat(self, precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::relative_difference;

    fn sq(k: i64) -> Surd {
        Surd::sqrt_of(k).unwrap()
    }

    #[test]
    fn canonical_radicands() {
        assert_eq!(sq(12), Surd::from_i64(2) * sq(3));
        assert_eq!(sq(2) * sq(2), Surd::from_i64(2));
        assert_eq!(sq(6), sq(2) * sq(3));
        assert_eq!(sq(49), Surd::from_i64(7));
        assert_eq!(sq(0), Surd::zero());
        assert!(matches!(Surd::sqrt_of(-1), Err(SurdError::NegativeRadicand)));
    }

    #[test]
    fn division_rationalises() {
        let d = sq(2) + sq(3) + sq(5);
        let q = Surd::from_i64(1).checked_div(&d).unwrap();
        assert_eq!(q * d, Surd::from_i64(1));
        assert!(Surd::from_i64(1).checked_div(&Surd::zero()).is_err());
    }

    #[test]
    fn signs_of_near_cancellation() {
        // sqrt(2) + sqrt(3) vs sqrt(10): 3.146... > 3.162...? no.
        let a = sq(2) + sq(3) - sq(10);
        assert_eq!(a.sign(), Sign::Negative);
        // (sqrt(6) - sqrt(5))^20 is tiny but positive
        let mut p = Surd::from_i64(1);
        for _ in 0..20 {
            p = p * (sq(6) - sq(5));
        }
        assert_eq!(p.sign(), Sign::Positive);
        assert!(p.to_f64() > 0.0 && p.to_f64() < 1e-10);
    }

    #[test]
    fn bigfloat_evaluation() {
        let s = sq(2).to_bigfloat(300);
        let two = BigFloat::from_i64(2, 300);
        assert!(relative_difference(&(&s * &s), &two) < 1e-88);
        assert_eq!(sq(2).to_f64(), std::f64::consts::SQRT_2);
    }

    #[test]
    fn display_round_trip_syntax() {
        let v = Surd::from_rational(Rational::from_parts((-3).into(), 2u8.into())) + sq(8);
        assert_eq!(v.to_string(), "-3/2+2*sqrt(2)");
    }
}
