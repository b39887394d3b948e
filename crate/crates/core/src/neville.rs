//! Neville elimination without row exchanges.
//!
//! Column `k` is cleared bottom-up: row `i` loses `m_ik` times row `i - 1`,
//! with `m_ik = a_ik / a_{i-1,k}` (zero when `a_{i-1,k} = 0`) computed
//! from the matrix at the start of the step. Zeros are tested exactly.

use crate::bd::BdMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Pivots and multipliers of one elimination run.
#[derive(Clone, Debug, PartialEq)]
pub struct NevilleTrace<S> {
    /// `pivots[(i, j)]` for `i >= j`: entry `(i, j)` at the start of step `j`.
    pub pivots: Matrix<S>,
    /// `multipliers[(i, j)]` for `i > j`.
    pub multipliers: Matrix<S>,
    pub row_exchange: bool,
}

impl<S: Scalar> NevilleTrace<S> {
    pub fn order(&self) -> usize {
        self.pivots.rows()
    }

    pub fn diagonal_pivots(&self) -> Vec<S> {
        (0..self.order()).map(|i| self.pivots[(i, i)].clone()).collect()
    }
}

pub fn neville_eliminate<S: Scalar>(a: &Matrix<S>) -> Result<NevilleTrace<S>> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let zero = a[(0, 0)].zero_like();
    let mut w = a.clone();
    let mut pivots = Matrix::from_fn(n, n, |_, _| zero.clone());
    let mut multipliers = pivots.clone();
    for k in 0..n {
        for i in k..n {
            pivots[(i, k)] = w[(i, k)].clone();
        }
        if let Some(row) = (k..n).position(|i| w[(i, k)].is_zero()).map(|p| p + k) {
            if let Some(bad) = (row + 1..n).find(|&h| !w[(h, k)].is_zero()) {
                return Err(Error::RowExchangeRequired { column: k, row: bad });
            }
            if row == k {
                return Err(Error::Singular { index: k });
            }
        }
        for i in (k + 1..n).rev() {
            let above = &w[(i - 1, k)];
            if above.is_zero() {
                continue;
            }
            let m = w[(i, k)].clone() / above.clone();
            for c in k + 1..n {
                let v = w[(i - 1, c)].clone();
                if !v.is_zero() {
                    w[(i, c)] = w[(i, c)].clone() - m.clone() * v;
                }
            }
            w[(i, k)] = zero.clone();
            multipliers[(i, k)] = m;
        }
    }
    Ok(NevilleTrace { pivots, multipliers, row_exchange: false })
}

/// BD of `a` from the eliminations of `a` and its transpose, with the
/// certificate classified from the signs.
pub fn bd_from_dense<S: Scalar>(a: &Matrix<S>) -> Result<BdMatrix<S>> {
    let lower = neville_eliminate(a)?;
    let upper = neville_eliminate(&a.transpose())?;
    let pivots = lower.diagonal_pivots();
    BdMatrix::from_fn(&pivots, |i, j| lower.multipliers[(i, j)].clone(), |i, j| upper.multipliers[(i, j)].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bd::Certificate;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn rows(r: Vec<Vec<i64>>) -> Matrix<Rational> {
        Matrix::from_rows(r.into_iter().map(|row| row.into_iter().map(q).collect()).collect())
    }

    #[test]
    fn pnl_five_one_two() {
        let a = rows(vec![vec![1, 0, 0], vec![5, 1, 0], vec![30, 10, 1]]);
        let t = neville_eliminate(&a).unwrap();
        assert_eq!(t.multipliers[(1, 0)], q(5));
        assert_eq!(t.multipliers[(2, 0)], q(6));
        assert_eq!(t.multipliers[(2, 1)], q(4));
        assert_eq!(t.diagonal_pivots(), vec![q(1); 3]);
        assert!(!t.row_exchange);
    }

    #[test]
    fn identity_has_zero_multipliers() {
        let a = Matrix::identity_like(4, &q(1));
        let bd = bd_from_dense(&a).unwrap();
        assert_eq!(bd, BdMatrix::identity_like(4, &q(1)).unwrap());
        assert_eq!(bd.certificate(), Certificate::NonsingularTp);
    }

    #[test]
    fn exchange_detected() {
        let a = rows(vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(neville_eliminate(&a), Err(Error::RowExchangeRequired { column: 0, row: 1 })));
    }

    #[test]
    fn singular_detected() {
        let a = rows(vec![vec![1, 2], vec![2, 4]]);
        assert!(matches!(neville_eliminate(&a), Err(Error::Singular { index: 1 })));
    }

    #[test]
    fn diagonal_matrix() {
        let bd = bd_from_dense(&rows(vec![vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(bd.pivots(), vec![q(2), q(3)]);
        assert!(bd.lower(1, 0).is_zero() && bd.upper(1, 0).is_zero());
    }

    #[test]
    fn neville_identity_holds_on_trace() {
        let a = rows(vec![vec![1, 1, 1], vec![1, 2, 3], vec![1, 3, 6]]);
        let t = neville_eliminate(&a).unwrap();
        for j in 0..3 {
            for i in j + 1..3 {
                let above = &t.pivots[(i - 1, j)];
                if !above.is_zero() {
                    assert_eq!(t.multipliers[(i, j)], t.pivots[(i, j)].clone() / above.clone());
                }
            }
        }
        assert_eq!(bd_from_dense(&a).unwrap().expand(), a);
    }
}
