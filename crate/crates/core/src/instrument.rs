//! Operation-counting scalar for cost and cancellation audits.
//!
//! [`Counted`] wraps any [`Scalar`] and tallies every arithmetic operation on
//! a per-thread counter. An addition whose operands have strictly opposite
//! signs (or a subtraction of strictly same-signed operands) is recorded as a
//! cancellation: those are the only operations that can lose relative
//! accuracy. Counters are thread-local so concurrent tests do not interfere;
//! call [`reset`] before the region of interest and [`snapshot`] after it.

use std::cell::Cell;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu::integer::IBig;

use crate::bigfloat::BigFloat;
use crate::scalar::{Refinable, Scalar, Sign};
use crate::surd::Surd;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub additions: u64,
    pub multiplications: u64,
    pub divisions: u64,
    pub cancellations: u64,
}

impl OpCounts {
    /// Additions, subtractions, multiplications and divisions.
    pub fn total(&self) -> u64 {
        self.additions + self.multiplications + self.divisions
    }
}

thread_local! {
    static COUNTS: Cell<OpCounts> = Cell::new(OpCounts::default());
}

pub fn reset() {
    COUNTS.with(|c| c.set(OpCounts::default()));
}

pub fn snapshot() -> OpCounts {
    COUNTS.with(|c| c.get())
}

fn record(f: impl FnOnce(&mut OpCounts)) {
    COUNTS.with(|c| {
        let mut v = c.get();
        f(&mut v);
        c.set(v);
    });
}

/// Scalar wrapper that records every arithmetic operation.
#[derive(Clone, Debug, PartialEq)]
pub struct Counted<S>(pub S);

impl<S: Scalar> Counted<S> {
    pub fn into_inner(self) -> S {
        self.0
    }
}

fn opposite(a: Sign, b: Sign) -> bool {
    matches!((a, b), (Sign::Positive, Sign::Negative) | (Sign::Negative, Sign::Positive))
}

impl<S: Scalar> Add for Counted<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let cancel = opposite(self.0.sign(), rhs.0.sign());
        record(|c| {
            c.additions += 1;
            c.cancellations += cancel as u64;
        });
        Counted(self.0 + rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<S: Scalar> Sub for Counted<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let cancel = opposite(self.0.sign(), rhs.0.sign().flip());
        record(|c| {
            c.additions += 1;
            c.cancellations += cancel as u64;
        });
        Counted(self.0 - rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<S: Scalar> Mul for Counted<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        record(|c| c.multiplications += 1);
        Counted(self.0 * rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<S: Scalar> Div for Counted<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        record(|c| c.divisions += 1);
        Counted(self.0 / rhs.0)
    }
}

impl<S: Scalar> Neg for Counted<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Counted(-self.0)
    }
}

impl<S: Scalar> Scalar for Counted<S> {
    fn zero_like(&self) -> Self {
        Counted(self.0.zero_like())
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Counted(self.0.from_i64_like(v))
    }

    fn from_integer_like(&self, v: &IBig) -> Self {
        Counted(self.0.from_integer_like(v))
    }

    fn sign(&self) -> Sign {
        self.0.sign()
    }

    fn to_exact(&self) -> Option<Surd> {
        self.0.to_exact()
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
}

impl<S: Refinable> Refinable for Counted<S> {
    fn to_bigfloat(&self, precision: usize) -> BigFloat {
        self.0.to_bigfloat(precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_cancellations() {
        reset();
        let a = Counted(2.0f64);
        let b = Counted(-3.0f64);
        let _ = a.clone() + b.clone(); // cancellation
        let _ = a.clone() - b.clone(); // same-sign sum
        let _ = a.clone() - a.clone(); // cancellation
        let _ = a.clone() * b.clone();
        let _ = a / b;
        let c = snapshot();
        assert_eq!(c.additions, 3);
        assert_eq!(c.cancellations, 2);
        assert_eq!(c.multiplications, 1);
        assert_eq!(c.divisions, 1);
        assert_eq!(c.total(), 5);
    }

    #[test]
    fn zero_operands_never_cancel() {
        reset();
        let _ = Counted(0.0f64) - Counted(5.0f64);
        let _ = Counted(-1.0f64) + Counted(0.0f64);
        assert_eq!(snapshot().cancellations, 0);
    }
}
