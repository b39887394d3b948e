//! Closed-form decompositions and dense definitions of the generalized
//! Pascal and lattice path families.
//!
//! Sizes are given by `n`; every matrix has order `n + 1`. Formulas in the
//! comments use 1-based indices `i, j`.

use dashu::integer::IBig;

use crate::bd::BdMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Sign};
use crate::surd::Surd;

/// Rows `0..=n` of Pascal's triangle from the addition recurrence.
pub fn binomial_table(n: usize) -> Vec<Vec<IBig>> {
    let mut rows: Vec<Vec<IBig>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![IBig::ONE; r + 1];
        for k in 1..r {
            row[k] = rows[r - 1][k - 1].clone() + rows[r - 1][k].clone();
        }
        rows.push(row);
    }
    rows
}

/// `x (x + l) ... (x + (n - 1) l)`, and `1` for `n = 0`.
pub fn factorial_power<S: Scalar>(x: &S, n: usize, lambda: &S) -> S {
    let mut acc = x.one_like();
    for k in 0..n {
        let factor = if k == 0 { x.clone() } else { x.clone() + x.from_i64_like(k as i64) * lambda.clone() };
        acc = acc * factor;
    }
    acc
}

/// `[x^{0|l}, x^{1|l}, ..., x^{n|l}]`, built incrementally.
fn factorial_powers<S: Scalar>(x: &S, n: usize, lambda: &S) -> Vec<S> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(x.one_like());
    for k in 0..n {
        let factor = if k == 0 { x.clone() } else { x.clone() + x.from_i64_like(k as i64) * lambda.clone() };
        let next = out[k].clone() * factor;
        out.push(next);
    }
    out
}

fn powers<S: Scalar>(x: &S, n: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(x.one_like());
    for k in 0..n {
        let next = out[k].clone() * x.clone();
        out.push(next);
    }
    out
}

fn exact(v: &impl Scalar, what: &str) -> Result<Surd> {
    v.to_exact().ok_or_else(|| Error::Parse(format!("{what} is not a finite number")))
}

/// `P_{n,l}[x]`: entry `(i, j) = x^{(i-j)|l} C(i-1, j-1)` for `j <= i`.
pub fn dense_pnl<S: Scalar>(x: &S, lambda: &S, n: usize) -> Matrix<S> {
    let c = binomial_table(n);
    let fp = factorial_powers(x, n, lambda);
    let zero = x.zero_like();
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        if j > i {
            zero.clone()
        } else {
            fp[i - j].clone() * x.from_integer_like(&c[i][j])
        }
    })
}

/// Structural case of the decomposition of `P_{n,l}[x]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PnlCase {
    /// `x != k l` for every `|k| < n`: all multipliers are generically nonzero.
    General,
    /// `x = k l` with `0 <= k < n`: only columns `j <= k` carry multipliers.
    Columns(usize),
    /// `x = -k l` with `0 < k < n`: only the first `k` subdiagonals carry multipliers.
    Bands(usize),
}

/// Case of `P_{n,l}[x]`, decided exactly. `x = l = 0` is `Columns(0)`.
pub fn pnl_case(x: &Surd, lambda: &Surd, n: usize) -> PnlCase {
    if lambda.is_zero() {
        return if x.is_zero() { PnlCase::Columns(0) } else { PnlCase::General };
    }
    let q = x.checked_div(lambda).expect("lambda is nonzero");
    let Some(k) = q.as_integer() else {
        return PnlCase::General;
    };
    let bound = IBig::from(n);
    if k >= IBig::ZERO && k < bound {
        PnlCase::Columns(usize::try_from(k).expect("k < n"))
    } else if k < IBig::ZERO && -k.clone() < bound {
        PnlCase::Bands(usize::try_from(-k).expect("k < n"))
    } else {
        PnlCase::General
    }
}

/// Closed-form decomposition of `P_{n,l}[x]`: unit pivots, no upper
/// multipliers, `m_ij = x + (i - 2j) l` on the case-dependent support.
///
/// The case is chosen from the exact values of `x` and `l` (binary64
/// inputs are read as the rationals they encode).
pub fn bd_pnl<S: Scalar>(x: &S, lambda: &S, n: usize) -> Result<BdMatrix<S>> {
    let case = pnl_case(&exact(x, "x")?, &exact(lambda, "lambda")?, n);
    let zero = x.zero_like();
    let pivots = vec![x.one_like(); n + 1];
    BdMatrix::from_fn(
        &pivots,
        |i, j| {
            // 1-based: i - 2j = (i0 + 1) - 2 (j0 + 1)
            let active = match case {
                PnlCase::General => true,
                PnlCase::Columns(k) => j < k,
                PnlCase::Bands(k) => i - j <= k,
            };
            if !active {
                return zero.clone();
            }
            let c = i as i64 - 2 * j as i64 - 1;
            if c == 0 {
                x.clone()
            } else {
                x.clone() + x.from_i64_like(c) * lambda.clone()
            }
        },
        |_, _| zero.clone(),
    )
}

/// Total positivity of `P_{n,l}[x]`: `x >= (n - 1)|l|` or `x = k|l|` for
/// some `k` in `0..n`.
pub fn is_tp_pnl<S: Scalar>(x: &S, lambda: &S, n: usize) -> bool {
    let (Some(x), Some(lambda)) = (x.to_exact(), lambda.to_exact()) else {
        return false;
    };
    if n == 0 {
        return true;
    }
    let abs_l = lambda.abs();
    let threshold = Surd::from_i64(n as i64 - 1) * abs_l.clone();
    if (x.clone() - threshold).sign() != Sign::Negative {
        return true;
    }
    if abs_l.is_zero() {
        return false;
    }
    match x.checked_div(&abs_l).expect("nonzero").as_integer() {
        Some(k) => k >= IBig::ZERO && k < IBig::from(n),
        None => false,
    }
}

/// Column scaling `(a_0, a_1 y^{1|l}, ..., a_n y^{n|l})`.
pub fn pnl_xya_scaling<S: Scalar>(y: &S, lambda: &S, a: &[S], n: usize) -> Result<Vec<S>> {
    if a.len() < n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: a.len() });
    }
    let fp = factorial_powers(y, n, lambda);
    Ok(fp.into_iter().zip(a).map(|(f, a)| a.clone() * f).collect())
}

/// Decomposition of `P_{n,l}[x, y, a] = P_{n,l}[x] diag(a_j y^{j|l})`.
pub fn bd_pnl_xya<S: Scalar>(x: &S, y: &S, lambda: &S, a: &[S], n: usize) -> Result<BdMatrix<S>> {
    let d = pnl_xya_scaling(y, lambda, a, n)?;
    bd_pnl(x, lambda, n)?.scale_columns(&d)
}

/// Entry `(i, j) = a_{j-1} y^{(j-1)|l} x^{(i-j)|l} C(i-1, j-1)` for `j <= i`.
pub fn dense_pnl_xya<S: Scalar>(x: &S, y: &S, lambda: &S, a: &[S], n: usize) -> Result<Matrix<S>> {
    if a.len() < n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: a.len() });
    }
    let c = binomial_table(n);
    let fx = factorial_powers(x, n, lambda);
    let fy = factorial_powers(y, n, lambda);
    let zero = x.zero_like();
    Ok(Matrix::from_fn(n + 1, n + 1, |i, j| {
        if j > i {
            zero.clone()
        } else {
            a[j].clone() * fy[j].clone() * fx[i - j].clone() * x.from_integer_like(&c[i][j])
        }
    }))
}

/// `Lp_n(a, b, g)`: first column `a^{i-1}`, first row `b^{j-1}` and
/// `k_ij = a k_{i-1,j} + b k_{i,j-1} + g k_{i-1,j-1}`.
pub fn dense_lattice<S: Scalar>(alpha: &S, beta: &S, gamma: &S, n: usize) -> Matrix<S> {
    let pa = powers(alpha, n);
    let pb = powers(beta, n);
    let mut k = Matrix::from_fn(n + 1, n + 1, |_, _| alpha.zero_like());
    for i in 0..=n {
        for j in 0..=n {
            k[(i, j)] = if j == 0 {
                pa[i].clone()
            } else if i == 0 {
                pb[j].clone()
            } else {
                alpha.clone() * k[(i - 1, j)].clone()
                    + beta.clone() * k[(i, j - 1)].clone()
                    + gamma.clone() * k[(i - 1, j - 1)].clone()
            };
        }
    }
    k
}

/// Decomposition of `Lp_n(a, b, g) = P_n[a] diag((ab + g)^{i-1}) P_n[b]^T`:
/// lower multipliers `a`, upper multipliers `b`, pivots `(ab + g)^{i-1}`.
///
/// Uses one multiplication and one addition for `ab + g` and one
/// multiplication per further pivot.
pub fn bd_lattice<S: Scalar>(alpha: &S, beta: &S, gamma: &S, n: usize) -> Result<BdMatrix<S>> {
    let s = alpha.clone() * beta.clone() + gamma.clone();
    if s.is_zero() {
        return Err(Error::SingularFamily("alpha*beta + gamma = 0".into()));
    }
    let mut pivots = Vec::with_capacity(n + 1);
    pivots.push(alpha.one_like());
    for i in 1..=n {
        let next = if i == 1 { s.clone() } else { pivots[i - 1].clone() * s.clone() };
        pivots.push(next);
    }
    BdMatrix::from_fn(&pivots, |_, _| alpha.clone(), |_, _| beta.clone())
}

/// Classical generalized Pascal matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicKind {
    /// `P_n[x, y]`, entries `x^{i-j} y^{j-1} C(i-1, j-1)` for `j <= i`.
    Pxy,
    /// `R_n[x, y]`, entries `x^{j-1} y^{i-1} C(i+j-2, j-1)`.
    Rxy,
    /// `Phi_n[x, y]`, entries `x^{i-j} y^{i+j-2} C(i-1, j-1)` for `j <= i`.
    Phi,
    /// `Psi_n[x, y]`, entries `x^{i-j} y^{i+j-2} C(i+j-2, j-1)`.
    Psi,
}

impl ClassicKind {
    pub const ALL: [ClassicKind; 4] = [ClassicKind::Pxy, ClassicKind::Rxy, ClassicKind::Phi, ClassicKind::Psi];

    pub fn name(self) -> &'static str {
        match self {
            ClassicKind::Pxy => "pxy",
            ClassicKind::Rxy => "r",
            ClassicKind::Phi => "phi",
            ClassicKind::Psi => "psi",
        }
    }
}

/// Lattice parameters `(alpha, beta, gamma)` of a classical matrix.
pub fn classic_lattice_params<S: Scalar>(kind: ClassicKind, x: &S, y: &S) -> Result<(S, S, S)> {
    let zero = x.zero_like();
    Ok(match kind {
        ClassicKind::Pxy => (x.clone(), zero, y.clone()),
        ClassicKind::Rxy => (y.clone(), x.clone(), zero),
        ClassicKind::Phi => (x.clone() * y.clone(), zero, y.clone() * y.clone()),
        ClassicKind::Psi => {
            if x.is_zero() {
                return Err(Error::DivisionByZero("Psi requires x != 0".into()));
            }
            (x.clone() * y.clone(), y.clone() / x.clone(), zero)
        }
    })
}

pub fn bd_classic<S: Scalar>(kind: ClassicKind, x: &S, y: &S, n: usize) -> Result<BdMatrix<S>> {
    let (a, b, g) = classic_lattice_params(kind, x, y)?;
    bd_lattice(&a, &b, &g, n)
}

/// Dense classical matrix from its entrywise definition.
pub fn dense_classic<S: Scalar>(kind: ClassicKind, x: &S, y: &S, n: usize) -> Result<Matrix<S>> {
    let c = binomial_table(2 * n);
    let px = powers(x, 2 * n);
    let py = powers(y, 2 * n);
    let zero = x.zero_like();
    let inv_x = match kind {
        ClassicKind::Psi if x.is_zero() => return Err(Error::DivisionByZero("Psi requires x != 0".into())),
        ClassicKind::Psi => Some(powers(&(x.one_like() / x.clone()), n)),
        _ => None,
    };
    let int = |v: &IBig| x.from_integer_like(v);
    Ok(Matrix::from_fn(n + 1, n + 1, |i, j| match kind {
        ClassicKind::Pxy if j > i => zero.clone(),
        ClassicKind::Pxy => px[i - j].clone() * py[j].clone() * int(&c[i][j]),
        ClassicKind::Rxy => px[j].clone() * py[i].clone() * int(&c[i + j][j]),
        ClassicKind::Phi if j > i => zero.clone(),
        ClassicKind::Phi => px[i - j].clone() * py[i + j].clone() * int(&c[i][j]),
        ClassicKind::Psi => {
            let xp = if i >= j { px[i - j].clone() } else { inv_x.as_ref().expect("psi")[j - i].clone() };
            xp * py[i + j].clone() * int(&c[i + j][j])
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bd::Certificate;
    use crate::neville::bd_from_dense;
    use crate::scalar::Rational;

    fn q(p: i64, d: u64) -> Rational {
        Rational::from_parts(p.into(), d.into())
    }

    fn z(v: i64) -> Rational {
        Rational::from(v)
    }

    fn table(rows: Vec<Vec<i64>>) -> Matrix<Rational> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(z).collect()).collect())
    }

    #[test]
    fn factorial_power_values() {
        assert_eq!(factorial_power(&z(3), 0, &z(7)), z(1));
        assert_eq!(factorial_power(&z(2), 3, &z(1)), z(24));
        assert_eq!(factorial_power(&z(-2), 4, &z(1)), z(0));
    }

    #[test]
    fn dense_pnl_values() {
        assert_eq!(dense_pnl(&z(1), &z(0), 2), table(vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 1]]));
        assert_eq!(dense_pnl(&z(5), &z(1), 2), table(vec![vec![1, 0, 0], vec![5, 1, 0], vec![30, 10, 1]]));
    }

    #[test]
    fn pascal_lower_expands_to_binomials() {
        let bd = bd_pnl(&z(1), &z(0), 4).unwrap();
        let c = binomial_table(4);
        let expected = Matrix::from_fn(5, 5, |i, j| if j <= i { Rational::from(c[i][j].clone()) } else { z(0) });
        assert_eq!(bd.expand(), expected);
    }

    #[test]
    fn pnl_cases() {
        let bd = bd_pnl(&z(5), &z(1), 2).unwrap();
        assert_eq!((bd.lower(1, 0), bd.lower(2, 0), bd.lower(2, 1)), (&z(5), &z(6), &z(4)));

        let s = |v: i64| Surd::from_i64(v);
        assert_eq!(pnl_case(&s(2), &s(1), 4), PnlCase::Columns(2));
        assert_eq!(pnl_case(&s(-1), &s(1), 3), PnlCase::Bands(1));
        assert_eq!(pnl_case(&s(0), &s(0), 3), PnlCase::Columns(0));
        assert_eq!(pnl_case(&s(7), &s(0), 3), PnlCase::General);
        assert_eq!(pnl_case(&s(3), &s(1), 3), PnlCase::General);

        let bd = bd_pnl(&z(2), &z(1), 4).unwrap();
        for i in 1..5 {
            for j in 0..i {
                assert_eq!(bd.lower(i, j).is_zero(), j >= 2, "({i},{j})");
            }
        }
        let bd = bd_pnl(&z(-1), &z(1), 3).unwrap();
        for i in 1..4 {
            for j in 0..i {
                let expected = if i - j == 1 { z(-1 + (i as i64 + 1) - 2 * (j as i64 + 1)) } else { z(0) };
                assert_eq!(bd.lower(i, j), &expected);
            }
        }
    }

    #[test]
    fn pnl_special_cases_match_elimination() {
        for (x, l, n) in [(2, 1, 4), (-1, 1, 3), (-2, 1, 5), (3, -1, 5), (0, 1, 3), (0, 0, 3), (-3, -1, 6)] {
            let (x, l) = (z(x), z(l));
            let bd = bd_pnl(&x, &l, n).unwrap();
            let dense = dense_pnl(&x, &l, n);
            assert_eq!(bd.expand(), dense);
            assert_eq!(bd_from_dense(&dense).unwrap().array(), bd.array());
        }
    }

    #[test]
    fn tp_predicate_examples() {
        assert!(!is_tp_pnl(&q(3, 2), &z(1), 5));
        assert!(is_tp_pnl(&z(4), &z(1), 5));
        assert!(is_tp_pnl(&z(2), &z(-1), 9));
        assert!(is_tp_pnl(&z(-5), &z(1), 0));
    }

    #[test]
    fn xya_family() {
        let ones = vec![z(1); 3];
        // y^{j|l} = 1 for every j only when l = 0
        assert_eq!(bd_pnl_xya(&z(5), &z(1), &z(0), &ones, 2).unwrap(), bd_pnl(&z(5), &z(0), 2).unwrap());
        assert_eq!(bd_pnl_xya(&z(5), &z(1), &z(1), &ones, 2).unwrap().pivots(), vec![z(1), z(1), z(2)]);
        let bd = bd_pnl_xya(&z(5), &z(2), &z(1), &ones, 2).unwrap();
        assert_eq!(bd.pivots(), vec![z(1), z(2), z(6)]);
        let a = vec![z(2), q(1, 3), z(-4), z(5)];
        let bd = bd_pnl_xya(&q(3, 2), &z(3), &z(1), &a, 3).unwrap();
        assert_eq!(bd.expand(), dense_pnl_xya(&q(3, 2), &z(3), &z(1), &a, 3).unwrap());
        assert!(matches!(
            bd_pnl_xya(&z(1), &z(-1), &z(1), &ones, 2),
            Err(Error::SingularDiagonal { index: 2 })
        ));
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(dense_lattice(&z(1), &z(1), &z(0), 2), table(vec![vec![1, 1, 1], vec![1, 2, 3], vec![1, 3, 6]]));
        let bd = bd_lattice(&z(2), &z(3), &z(1), 1).unwrap();
        assert_eq!(bd.pivots(), vec![z(1), z(7)]);
        assert_eq!((bd.lower(1, 0), bd.upper(1, 0)), (&z(2), &z(3)));
        assert_eq!(bd.certificate(), Certificate::Stp);
        assert_eq!(bd.expand(), dense_lattice(&z(2), &z(3), &z(1), 1));
        assert_eq!(bd.expand(), table(vec![vec![1, 3], vec![2, 13]]));
        assert_eq!(bd_lattice(&z(1), &z(1), &z(0), 3).unwrap().array(), &Matrix::from_fn(4, 4, |_, _| z(1)));
        assert!(matches!(bd_lattice(&z(2), &z(3), &z(-6), 2), Err(Error::SingularFamily(_))));
        assert_eq!(bd_lattice(&z(1), &z(1), &z(6), 2).unwrap().determinant(), z(343));
    }

    #[test]
    fn classic_examples() {
        let bd = bd_classic(ClassicKind::Rxy, &z(1), &z(1), 3).unwrap();
        assert_eq!(bd.array(), &Matrix::from_fn(4, 4, |_, _| z(1)));
        assert_eq!(bd_classic(ClassicKind::Rxy, &z(2), &z(3), 3).unwrap().certificate(), Certificate::Stp);
        let phi = bd_classic(ClassicKind::Phi, &z(1), &z(2), 1).unwrap();
        assert_eq!(phi.expand(), table(vec![vec![1, 0], vec![2, 4]]));
        for kind in ClassicKind::ALL {
            let (x, y) = (q(3, 2), q(-2, 5));
            let bd = bd_classic(kind, &x, &y, 4).unwrap();
            assert_eq!(bd.expand(), dense_classic(kind, &x, &y, 4).unwrap(), "{kind:?}");
        }
        assert!(matches!(bd_classic(ClassicKind::Psi, &z(0), &z(1), 2), Err(Error::DivisionByZero(_))));
    }
}
