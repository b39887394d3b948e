//! High-precision reference values.
//!
//! The reference matrix is built from the definitional entry formulas in
//! exact arithmetic, never from a bidiagonal decomposition. Rational
//! instances of inverse and solve are computed exactly; everything else runs
//! through the dense kernels at doubling binary precision until two
//! consecutive levels agree to the requested number of decimal digits.

use crate::bigfloat::{relative_difference, BigFloat};
use crate::dense::{self, Lu};
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::matrix::Matrix;
use crate::scalar::{rational_from_f64, Rational, Refinable, Scalar};
use crate::surd::Surd;
use crate::tn::{ladder, packed_eigenvalues, real_parts};

/// Default number of certified decimal digits.
pub const DEFAULT_DIGITS: usize = 100;
/// Largest accepted digit request.
pub const MAX_DIGITS: usize = 300;
/// Working precision ceiling in bits.
pub const ORACLE_CEILING: usize = 1 << 16;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    Eigenvalues,
    SingularValues,
    Inverse,
    Solve(Vec<f64>),
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Row-major values; spectra are `n x 1`.
    pub values: Vec<BigFloat>,
    pub rows: usize,
    pub cols: usize,
    pub precision_used: usize,
    pub certified_digits: usize,
    /// Exact values on the rational path.
    pub exact: Option<Vec<Rational>>,
}

impl OracleResult {
    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(BigFloat::to_f64).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Smallest entry, for spectra sorted in descending order.
    pub fn last(&self) -> Option<&BigFloat> {
        self.values.last()
    }
}

fn check_digits(digits: usize) -> Result<()> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::Config(format!("oracle digits {digits} outside 1..={MAX_DIGITS}")));
    }
    Ok(())
}

fn start_bits(digits: usize) -> usize {
    (digits as f64 * LOG2_10).ceil() as usize + 32
}

fn shape(spec: &FamilySpec, query: &Query) -> (usize, usize) {
    let n = spec.order();
    match query {
        Query::Inverse => (n, n),
        _ => (n, 1),
    }
}

fn dense_at(a: &Matrix<Surd>, p: usize) -> Matrix<BigFloat> {
    a.map(|s| s.to_bigfloat(p))
}

/// The query evaluated once at `precision` bits on the dense exact matrix.
pub fn evaluate(spec: &FamilySpec, query: &Query, precision: usize) -> Result<Vec<BigFloat>> {
    let a = dense_at(&spec.dense_exact()?, precision);
    evaluate_dense(&a, query, precision)
}

fn evaluate_dense(a: &Matrix<BigFloat>, query: &Query, precision: usize) -> Result<Vec<BigFloat>> {
    match query {
        Query::Eigenvalues => packed_eigenvalues(a),
        Query::SingularValues => dense::singular_values(a),
        Query::Inverse => Ok(Lu::factor(a)?.inverse()?.into_data()),
        Query::Solve(b) => {
            check_rhs(a.rows(), b)?;
            let b: Vec<BigFloat> = b.iter().map(|v| BigFloat::from_f64(*v, precision)).collect();
            Lu::factor(a)?.solve(&b)
        }
    }
}

fn check_rhs(n: usize, b: &[f64]) -> Result<()> {
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("right-hand side must be finite".into()));
    }
    Ok(())
}

fn digits_of(change: f64, precision: usize, requested: usize) -> usize {
    let available = (precision as f64 / LOG2_10).floor() as usize;
    let observed = if change > 0.0 { (-change.log10()).floor() as usize } else { available };
    observed.min(available).max(requested)
}

/// Reference values for `query` certified to `digits` decimal digits.
pub fn oracle(spec: &FamilySpec, query: &Query, digits: usize) -> Result<OracleResult> {
    check_digits(digits)?;
    let (rows, cols) = shape(spec, query);
    if let Some(exact) = exact_path(spec, query)? {
        let p = start_bits(digits);
        return Ok(OracleResult {
            values: exact.iter().map(|q| q.to_bigfloat(p)).collect(),
            rows,
            cols,
            precision_used: p,
            certified_digits: digits,
            exact: Some(exact),
        });
    }
    let dense = spec.dense_exact()?;
    if *query == Query::Eigenvalues && (dense.is_lower_triangular() || dense.transpose().is_lower_triangular()) {
        return Ok(triangular_spectrum(&dense, rows, digits));
    }
    let tolerance = 10f64.powi(-(digits as i32));
    let (mut values, p, change) = ladder(start_bits(digits), ORACLE_CEILING, tolerance, |p| {
        evaluate_dense(&dense_at(&dense, p), query, p)
    })?;
    if *query == Query::Eigenvalues {
        values = real_parts(&values)?;
    }
    Ok(OracleResult { values, rows, cols, precision_used: p, certified_digits: digits_of(change, p, digits), exact: None })
}

/// Diagonal of a triangular matrix, exact and sorted in descending order.
fn triangular_spectrum(a: &Matrix<Surd>, rows: usize, digits: usize) -> OracleResult {
    let mut diag: Vec<Surd> = (0..a.rows()).map(|i| a[(i, i)].clone()).collect();
    diag.sort_by(|x, y| y.cmp_value(x));
    let p = start_bits(digits);
    let exact = diag.iter().map(Surd::as_rational).collect::<Option<Vec<_>>>();
    OracleResult {
        values: diag.iter().map(|s| s.to_bigfloat(p)).collect(),
        rows,
        cols: 1,
        precision_used: p,
        certified_digits: digits,
        exact,
    }
}

fn exact_path(spec: &FamilySpec, query: &Query) -> Result<Option<Vec<Rational>>> {
    let rhs = match query {
        Query::Inverse => None,
        Query::Solve(b) => {
            check_rhs(spec.order(), b)?;
            Some(b.iter().map(|v| rational_from_f64(*v).expect("finite")).collect::<Vec<_>>())
        }
        _ => return Ok(None),
    };
    let Some(a) = spec.dense_rational()? else {
        return Ok(None);
    };
    Ok(Some(match rhs {
        None => dense::exact_inverse(&a)?.into_data(),
        Some(b) => dense::exact_solve(&a, &b)?,
    }))
}

pub fn oracle_eigenvalues(spec: &FamilySpec, digits: usize) -> Result<OracleResult> {
    oracle(spec, &Query::Eigenvalues, digits)
}

pub fn oracle_singular_values(spec: &FamilySpec, digits: usize) -> Result<OracleResult> {
    oracle(spec, &Query::SingularValues, digits)
}

pub fn oracle_inverse(spec: &FamilySpec, digits: usize) -> Result<OracleResult> {
    oracle(spec, &Query::Inverse, digits)
}

pub fn oracle_solve(spec: &FamilySpec, b: &[f64], digits: usize) -> Result<OracleResult> {
    oracle(spec, &Query::Solve(b.to_vec()), digits)
}

/// Re-derives `result`: exact results are substituted back into the exact
/// matrix, others are recomputed at twice the precision and must move by
/// less than `10^-certified_digits`.
pub fn self_check(spec: &FamilySpec, query: &Query, result: &OracleResult) -> Result<bool> {
    if let Some(exact) = &result.exact {
        let a = spec.dense_rational()?.ok_or_else(|| Error::Config("exact result for irrational family".into()))?;
        let n = a.rows();
        return Ok(match query {
            Query::Inverse => a.matmul(&Matrix::from_vec(n, n, exact.clone())) == Matrix::identity_like(n, &Rational::ONE),
            Query::Solve(b) => {
                let b: Vec<Rational> = b.iter().map(|v| rational_from_f64(*v).expect("finite")).collect();
                a.mul_vec(exact) == b
            }
            Query::Eigenvalues => {
                let mut diag: Vec<Rational> = (0..n).map(|i| a[(i, i)].clone()).collect();
                diag.sort_by(|x, y| y.cmp(x));
                (a.is_lower_triangular() || a.transpose().is_lower_triangular()) && diag == *exact
            }
            Query::SingularValues => false,
        });
    }
    let mut again = evaluate(spec, query, 2 * result.precision_used)?;
    if *query == Query::Eigenvalues {
        again = real_parts(&again)?;
    }
    if again.len() != result.values.len() {
        return Ok(false);
    }
    let bound = 10f64.powi(-(result.certified_digits as i32));
    Ok(again.iter().zip(&result.values).all(|(x, y)| relative_difference(x, y) < bound))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorStats {
    pub componentwise: Vec<f64>,
    pub mean: f64,
    pub max: f64,
}

impl ErrorStats {
    /// Index of the largest componentwise error.
    pub fn argmax(&self) -> Option<usize> {
        (0..self.componentwise.len()).max_by(|&a, &b| self.componentwise[a].total_cmp(&self.componentwise[b]))
    }
}

/// `|a - r| / |r|` per component, with `0/0 = 0` and `x/0 = inf`.
pub fn relative_error(approx: f64, reference: &BigFloat) -> f64 {
    if !approx.is_finite() {
        return f64::INFINITY;
    }
    let a = BigFloat::from_f64(approx, reference.precision().max(64));
    let diff = (&a - reference).abs();
    if reference.sign().is_zero() {
        return if diff.sign().is_zero() { 0.0 } else { f64::INFINITY };
    }
    (diff / reference.abs()).to_f64()
}

pub fn relative_errors(approx: &[f64], reference: &OracleResult) -> Result<ErrorStats> {
    if approx.len() != reference.values.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} values against a reference of {}",
            approx.len(),
            reference.values.len()
        )));
    }
    let componentwise: Vec<f64> = approx.iter().zip(&reference.values).map(|(a, r)| relative_error(*a, r)).collect();
    let max = componentwise.iter().copied().fold(0.0, f64::max);
    let mean = if componentwise.is_empty() { 0.0 } else { componentwise.iter().sum::<f64>() / componentwise.len() as f64 };
    Ok(ErrorStats { componentwise, mean, max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;

    fn spec(s: &str, n: usize) -> FamilySpec {
        s.parse::<Family>().unwrap().with_n(n)
    }

    #[test]
    fn identity_from_pascal_zero() {
        let s = spec("pnl:x=0,lambda=0", 3);
        let ev = oracle_eigenvalues(&s, 50).unwrap();
        assert_eq!(ev.to_f64(), vec![1.0; 4]);
        assert!(self_check(&s, &Query::Eigenvalues, &ev).unwrap());
        let pascal = spec("pnl:x=3/2,lambda=1", 30);
        let ev = oracle_eigenvalues(&pascal, 100).unwrap();
        assert!(ev.is_exact() && ev.to_f64() == vec![1.0; 31]);
        assert!(self_check(&pascal, &Query::Eigenvalues, &ev).unwrap());
        let inv = oracle_inverse(&s, 50).unwrap();
        assert!(inv.is_exact());
        assert_eq!(inv.to_f64(), Matrix::<f64>::identity_like(4, &1.0).into_data());
    }

    #[test]
    fn two_by_two_closed_forms() {
        // [[1, 1], [1, 2]]
        let s = spec("rxy:x=1,y=1", 1);
        assert_eq!(s.dense_f64().unwrap().into_data(), vec![1.0, 1.0, 1.0, 2.0]);
        let ev = oracle_eigenvalues(&s, 100).unwrap();
        let root5 = BigFloat::from_i64(5, 600).sqrt();
        let three = BigFloat::from_i64(3, 600);
        let two = BigFloat::from_i64(2, 600);
        let hi = (three.clone() + root5.clone()) / two.clone();
        let lo = (three - root5) / two;
        assert!(relative_difference(&ev.values[0], &hi) < 1e-100);
        assert!(relative_difference(&ev.values[1], &lo) < 1e-100);
        let sv = oracle_singular_values(&s, 100).unwrap();
        assert!(relative_difference(&sv.values[1], &lo) < 1e-100);
        let x = oracle_solve(&s, &[1.0, -1.0], 100).unwrap();
        assert_eq!(x.exact.unwrap(), vec![Rational::from(3), Rational::from(-2)]);
    }

    #[test]
    fn irrational_lattice_is_stable_under_doubling() {
        let s = spec("lattice:alpha=sqrt(2),beta=sqrt(3),gamma=sqrt(5)", 4);
        for q in [Query::Eigenvalues, Query::SingularValues, Query::Inverse, Query::Solve(vec![1.0, -2.0, 3.0, -4.0, 5.0])] {
            let r = oracle(&s, &q, 100).unwrap();
            assert!(r.exact.is_none());
            assert!(r.certified_digits >= 100);
            assert!(self_check(&s, &q, &r).unwrap(), "{q:?}");
        }
    }

    #[test]
    fn rational_paths_agree_with_high_precision() {
        let s = spec("lattice:alpha=2,beta=3,gamma=1", 3);
        let exact = oracle_inverse(&s, 60).unwrap();
        assert!(self_check(&s, &Query::Inverse, &exact).unwrap());
        let approx = evaluate(&s, &Query::Inverse, 400).unwrap();
        for (x, y) in approx.iter().zip(&exact.values) {
            assert!(relative_difference(x, y) < 1e-60);
        }
    }

    #[test]
    fn error_conventions() {
        let s = spec("rxy:x=1,y=1", 1);
        let r = oracle_solve(&s, &[1.0, -1.0], 30).unwrap();
        let e = relative_errors(&[3.0, -2.0], &r).unwrap();
        assert_eq!(e.max, 0.0);
        let e = relative_errors(&[3.0, -2.0 * (1.0 + f64::EPSILON)], &r).unwrap();
        assert!((e.max - f64::EPSILON).abs() < 1e-30);
        assert_eq!(e.argmax(), Some(1));
        let zero = BigFloat::zero(64);
        assert_eq!(relative_error(0.0, &zero), 0.0);
        assert_eq!(relative_error(1.0, &zero), f64::INFINITY);
        assert_eq!(relative_error(f64::NAN, &zero), f64::INFINITY);
        assert!(matches!(relative_errors(&[1.0], &r), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn digit_range() {
        let s = spec("rxy:x=1,y=1", 1);
        assert!(oracle_eigenvalues(&s, 0).is_err());
        assert!(oracle_eigenvalues(&s, 301).is_err());
    }
}
