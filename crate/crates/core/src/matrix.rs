//! Row-major dense matrices over any scalar domain.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Clone> Matrix<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    /// Builds from nested rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Keeps the rows and columns listed (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S: Scalar> Matrix<S> {
    /// Identity with constants taken from `like`.
    pub fn identity_like(n: usize, like: &S) -> Self {
        let zero = like.zero_like();
        let one = like.one_like();
        Matrix::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn diagonal(d: &[S]) -> Self {
        let n = d.len();
        match d.first() {
            None => Matrix { rows: 0, cols: 0, data: Vec::new() },
            Some(like) => {
                let zero = like.zero_like();
                Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { zero.clone() })
            }
        }
    }

    /// Panics on a dimension mismatch.
    pub fn matmul(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        let like = self.data.first().or(rhs.data.first());
        let Some(like) = like else {
            return Matrix { rows: self.rows, cols: rhs.cols, data: Vec::new() };
        };
        let zero = like.zero_like();
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = v.first().map(S::zero_like).unwrap_or_else(|| self.data[0].zero_like());
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self[(i, k)].clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_small() {
        let a = Matrix::from_rows(vec![vec![1.0, 0.0], vec![1.0, 1.0]]);
        let b = Matrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]);
        assert_eq!(a.matmul(&b), Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 2.0]]));
        assert_eq!(a.mul_vec(&[2.0, 3.0]), vec![2.0, 5.0]);
        assert!(a.is_lower_triangular());
        assert!(!b.is_lower_triangular());
        assert_eq!(b.transpose(), a);
    }
}
