//! Bidiagonal decomposition storage, validation and expansion.
//!
//! A nonsingular `N x N` matrix is represented as
//! `A = F_{N-1} ... F_1 D G_1 ... G_{N-1}` where each `F_i` is unit lower
//! bidiagonal, each `G_i` unit upper bidiagonal and `D` diagonal. All the
//! parameters live in one square array:
//!
//! * `(i, i)` holds the pivot `p_i`,
//! * `(i, j)` with `i > j` holds the lower multiplier `m_ij`,
//! * `(j, i)` with `i > j` holds the upper multiplier `m~_ij`
//!   (the multiplier of the elimination of the transpose).
//!
//! Indices in this API are 0-based. `F_i` carries `m_{r, r-i}` at position
//! `(r, r-1)` for `r = i..N`, and `G_i` carries `m~_{r, r-i}` at `(r-1, r)`.
//!
//! Zeros are tested exactly (`0.0` in binary64), never against a tolerance.

mod json;

use std::fmt;

pub use json::{BdText, CERTIFICATE_NAMES};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Sign};

/// Total positivity claim attached to a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// Strictly totally positive: every multiplier and pivot is positive.
    Stp,
    /// Nonsingular totally positive: nonnegative multipliers obeying the
    /// zero pattern, positive pivots.
    NonsingularTp,
    Unclassified,
}

impl Certificate {
    pub fn is_tp(self) -> bool {
        self != Certificate::Unclassified
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Stp => "stp",
            Certificate::NonsingularTp => "tp",
            Certificate::Unclassified => "unclassified",
        })
    }
}

/// Which multiplier table a diagnostic refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

/// A violated invariant. Positions are stored 0-based and displayed 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum Diagnostic {
    SingularPivot { index: usize },
    NonPositivePivot { index: usize },
    NonPositiveMultiplier { side: Side, i: usize, j: usize },
    NegativeMultiplier { side: Side, i: usize, j: usize },
    ZeroPropagation { side: Side, column: usize, row: usize },
    NonFinite { i: usize, j: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Diagnostic::SingularPivot { index } => write!(f, "singular pivot at {}", index + 1),
            Diagnostic::NonPositivePivot { index } => {
                write!(f, "non-positive pivot at {} under a TP certificate", index + 1)
            }
            Diagnostic::NonPositiveMultiplier { side, i, j } => {
                write!(f, "non-positive {side} multiplier at ({}, {}) under an STP certificate", i + 1, j + 1)
            }
            Diagnostic::NegativeMultiplier { side, i, j } => {
                write!(f, "negative {side} multiplier at ({}, {}) under a TP certificate", i + 1, j + 1)
            }
            Diagnostic::ZeroPropagation { side, column, row } => write!(
                f,
                "zero-propagation violated at column {} ({side} multiplier at row {} is nonzero below a zero)",
                column + 1,
                row + 1
            ),
            Diagnostic::NonFinite { i, j } => write!(f, "non-finite entry at ({}, {})", i + 1, j + 1),
        }
    }
}

/// Bidiagonal decomposition of a square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BdMatrix<S> {
    array: Matrix<S>,
    certificate: Certificate,
}

impl<S: Scalar> BdMatrix<S> {
    /// Wraps a BD array. The certificate is a claim checked by [`validate`](Self::validate).
    pub fn from_array(array: Matrix<S>, certificate: Certificate) -> Result<Self> {
        if !array.is_square() || array.rows() == 0 {
            return Err(Error::NotSquare { rows: array.rows(), cols: array.cols() });
        }
        Ok(BdMatrix { array, certificate })
    }

    /// Wraps a BD array with the certificate implied by its signs.
    pub fn classified(array: Matrix<S>) -> Result<Self> {
        let mut bd = Self::from_array(array, Certificate::Unclassified)?;
        bd.certificate = bd.classify();
        Ok(bd)
    }

    /// Builds from pivots and closures giving the lower and upper multipliers.
    pub fn from_fn(
        pivots: &[S],
        mut lower: impl FnMut(usize, usize) -> S,
        mut upper: impl FnMut(usize, usize) -> S,
    ) -> Result<Self> {
        let n = pivots.len();
        if n == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let array = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                pivots[i].clone()
            } else if i > j {
                lower(i, j)
            } else {
                upper(j, i)
            }
        });
        Self::classified(array)
    }

    pub fn diagonal(pivots: &[S]) -> Result<Self> {
        let Some(z) = pivots.first().map(Scalar::zero_like) else {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        };
        Self::from_fn(pivots, |_, _| z.clone(), |_, _| z.clone())
    }

    pub fn identity_like(n: usize, like: &S) -> Result<Self> {
        Self::diagonal(&vec![like.one_like(); n])
    }

    pub fn order(&self) -> usize {
        self.array.rows()
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn with_certificate(mut self, certificate: Certificate) -> Self {
        self.certificate = certificate;
        self
    }

    /// The raw BD array.
    pub fn array(&self) -> &Matrix<S> {
        &self.array
    }

    pub fn pivot(&self, i: usize) -> &S {
        &self.array[(i, i)]
    }

    pub fn pivots(&self) -> Vec<S> {
        (0..self.order()).map(|i| self.pivot(i).clone()).collect()
    }

    /// Lower multiplier `m_ij`, `i > j`.
    pub fn lower(&self, i: usize, j: usize) -> &S {
        debug_assert!(i > j);
        &self.array[(i, j)]
    }

    /// Upper multiplier `m~_ij`, `i > j`.
    pub fn upper(&self, i: usize, j: usize) -> &S {
        debug_assert!(i > j);
        &self.array[(j, i)]
    }

    pub fn multiplier(&self, side: Side, i: usize, j: usize) -> &S {
        match side {
            Side::Lower => self.lower(i, j),
            Side::Upper => self.upper(i, j),
        }
    }

    pub fn is_lower_triangular(&self) -> bool {
        let n = self.order();
        (1..n).all(|i| (0..i).all(|j| self.upper(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.order();
        (1..n).all(|i| (0..i).all(|j| self.lower(i, j).is_zero()))
    }

    pub fn map<T: Scalar>(&self, f: impl FnMut(&S) -> T) -> BdMatrix<T> {
        BdMatrix { array: self.array.map(f), certificate: self.certificate }
    }

    /// Certificate implied by the signs of the parameters.
    pub fn classify(&self) -> Certificate {
        let n = self.order();
        let pivots_positive = (0..n).all(|i| self.pivot(i).sign() == Sign::Positive);
        if !pivots_positive {
            return Certificate::Unclassified;
        }
        let mut all_positive = true;
        for side in [Side::Lower, Side::Upper] {
            for i in 1..n {
                for j in 0..i {
                    match self.multiplier(side, i, j).sign() {
                        Sign::Negative => return Certificate::Unclassified,
                        Sign::Zero => all_positive = false,
                        Sign::Positive => {}
                    }
                }
            }
        }
        if all_positive {
            Certificate::Stp
        } else if self.zero_propagation_violations().is_empty() {
            Certificate::NonsingularTp
        } else {
            Certificate::Unclassified
        }
    }

    fn zero_propagation_violations(&self) -> Vec<Diagnostic> {
        let n = self.order();
        let mut out = Vec::new();
        for side in [Side::Lower, Side::Upper] {
            for column in 0..n {
                let mut seen_zero = false;
                for row in column + 1..n {
                    let zero = self.multiplier(side, row, column).is_zero();
                    if seen_zero && !zero {
                        out.push(Diagnostic::ZeroPropagation { side, column, row });
                        break;
                    }
                    seen_zero |= zero;
                }
            }
        }
        out
    }

    /// Every violated invariant; empty iff the decomposition is valid for its certificate.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let n = self.order();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.array[(i, j)].is_finite() {
                    out.push(Diagnostic::NonFinite { i, j });
                }
            }
        }
        for index in 0..n {
            match self.pivot(index).sign() {
                Sign::Zero => out.push(Diagnostic::SingularPivot { index }),
                Sign::Negative if self.certificate.is_tp() => {
                    out.push(Diagnostic::NonPositivePivot { index })
                }
                _ => {}
            }
        }
        if self.certificate.is_tp() {
            for side in [Side::Lower, Side::Upper] {
                for i in 1..n {
                    for j in 0..i {
                        match (self.multiplier(side, i, j).sign(), self.certificate) {
                            (Sign::Negative, _) => out.push(Diagnostic::NegativeMultiplier { side, i, j }),
                            (Sign::Zero, Certificate::Stp) => {
                                out.push(Diagnostic::NonPositiveMultiplier { side, i, j })
                            }
                            _ => {}
                        }
                    }
                }
            }
            if self.certificate == Certificate::NonsingularTp {
                out.extend(self.zero_propagation_violations());
            }
        }
        out
    }

    /// Fails with [`Error::Validation`] when [`validate`](Self::validate) is non-empty.
    pub fn ensure_valid(&self) -> Result<()> {
        let d = self.validate();
        if d.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(d))
        }
    }

    /// Dense product of the factors.
    pub fn expand(&self) -> Matrix<S> {
        let n = self.order();
        let mut m = Matrix::identity_like(n, self.pivot(0));
        // G_{N-1} ... G_1, each applied on the left of the running product.
        for i in (1..n).rev() {
            for r in i..n {
                let g = self.upper(r, r - i);
                if g.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = m[(r, c)].clone();
                    if !v.is_zero() {
                        m[(r - 1, c)] = m[(r - 1, c)].clone() + g.clone() * v;
                    }
                }
            }
        }
        for r in 0..n {
            for c in 0..n {
                if !m[(r, c)].is_zero() {
                    m[(r, c)] = self.pivot(r).clone() * m[(r, c)].clone();
                }
            }
        }
        for i in 1..n {
            for r in (i..n).rev() {
                let f = self.lower(r, r - i);
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = m[(r - 1, c)].clone();
                    if !v.is_zero() {
                        m[(r, c)] = m[(r, c)].clone() + f.clone() * v;
                    }
                }
            }
        }
        m
    }

    /// [`expand`](Self::expand), reporting the first non-finite entry as saturation.
    pub fn expand_checked(&self) -> Result<Matrix<S>> {
        let m = self.expand();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !m[(r, c)].is_finite() {
                    return Err(Error::Saturated { row: r, col: c });
                }
            }
        }
        Ok(m)
    }

    /// `A v` without forming `A`.
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        let n = self.order();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let mut y = v.to_vec();
        for i in (1..n).rev() {
            for r in i..n {
                let g = self.upper(r, r - i);
                if !g.is_zero() {
                    y[r - 1] = y[r - 1].clone() + g.clone() * y[r].clone();
                }
            }
        }
        for (r, yr) in y.iter_mut().enumerate() {
            *yr = self.pivot(r).clone() * yr.clone();
        }
        for i in 1..n {
            for r in (i..n).rev() {
                let f = self.lower(r, r - i);
                if !f.is_zero() {
                    y[r] = y[r].clone() + f.clone() * y[r - 1].clone();
                }
            }
        }
        Ok(y)
    }

    pub fn determinant(&self) -> S {
        (1..self.order()).fold(self.pivot(0).clone(), |acc, i| acc * self.pivot(i).clone())
    }

    /// BD of `A diag(d)` for lower triangular `A`.
    ///
    /// The certificate is kept when every `d_i > 0` and dropped to
    /// `Unclassified` otherwise.
    pub fn scale_columns(&self, d: &[S]) -> Result<Self> {
        let n = self.order();
        if d.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: d.len() });
        }
        if !self.is_lower_triangular() {
            return Err(Error::NotLowerTriangular);
        }
        if let Some(index) = d.iter().position(Scalar::is_zero) {
            return Err(Error::SingularDiagonal { index });
        }
        let mut array = self.array.clone();
        for (i, di) in d.iter().enumerate() {
            array[(i, i)] = array[(i, i)].clone() * di.clone();
        }
        let certificate = if d.iter().all(|x| x.sign() == Sign::Positive) {
            self.certificate
        } else {
            Certificate::Unclassified
        };
        Ok(BdMatrix { array, certificate })
    }
}
