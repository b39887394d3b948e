//! Linear algebra driven by bidiagonal decompositions.
//!
//! Solves and inverses sweep the elementary factors directly. Eigenvalues
//! and singular values are certified: the decomposition is evaluated at a
//! ladder of binary precisions, expanded, and handed to the dense kernels
//! until two consecutive precisions agree.

use crate::bd::BdMatrix;
use crate::bigfloat::{relative_difference, BigFloat};
use crate::dense;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::par::Execution;
use crate::scalar::{Refinable, Scalar, Sign};

/// First rung of the precision ladder, in bits.
pub const LADDER_START: usize = 106;
/// Last rung of the precision ladder, in bits.
pub const LADDER_CEILING: usize = 3392;
/// Default target relative error of certified results.
pub const DEFAULT_TOLERANCE: f64 = f64::EPSILON;
/// Largest admissible target relative error, `2^-20`.
pub const MAX_TOLERANCE: f64 = 9.5367431640625e-7;

/// Sign structure of a right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignPattern {
    /// `s (-1)^i b_i >= 0` for every 0-based `i`, with `s = +1` or `-1`.
    Alternating(i8),
    Mixed,
}

impl SignPattern {
    pub fn is_alternating(self) -> bool {
        matches!(self, SignPattern::Alternating(_))
    }
}

/// Classifies `b`; zeros fit either sign and all-zero vectors are `Alternating(+1)`.
pub fn sign_pattern<S: Scalar>(b: &[S]) -> SignPattern {
    let fits = |s: i8| {
        b.iter().enumerate().all(|(i, v)| {
            let want = if (i % 2 == 0) == (s > 0) { Sign::Positive } else { Sign::Negative };
            let sign = v.sign();
            sign == Sign::Zero || sign == want
        })
    };
    if fits(1) {
        SignPattern::Alternating(1)
    } else if fits(-1) {
        SignPattern::Alternating(-1)
    } else {
        SignPattern::Mixed
    }
}

/// How the accurate routines compute.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AccuracyMode {
    /// Factor sweeps in binary64.
    StructuredDouble,
    /// Precision ladder until consecutive results agree to `tolerance`.
    CertifiedPrecision { tolerance: f64 },
}

impl AccuracyMode {
    pub fn certified() -> Self {
        AccuracyMode::CertifiedPrecision { tolerance: DEFAULT_TOLERANCE }
    }

    /// Fails unless `0 < tolerance <= 2^-20`.
    pub fn certified_with(tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance <= MAX_TOLERANCE) {
            return Err(Error::Config(format!("tolerance {tolerance:e} outside (0, 2^-20]")));
        }
        Ok(AccuracyMode::CertifiedPrecision { tolerance })
    }
}

/// A binary64 result with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome<T> {
    pub value: T,
    /// Working precision of the accepted result.
    pub precision_bits: usize,
    /// Observed relative change between the last two precisions; `None`
    /// for uncertified structured results.
    pub error_bound: Option<f64>,
    /// Every subtraction combined same-signed quantities.
    pub hra: bool,
}

/// Position inside a solve, reported to observers after each factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepStage {
    Lower(usize),
    Diagonal,
    Upper(usize),
}

/// Solves `A x = b` by inverting the factors in turn:
/// `F_{N-1}^{-1}, ..., F_1^{-1}`, then `D^{-1}`, then `G_1^{-1}, ..., G_{N-1}^{-1}`.
pub fn bd_solve<S: Scalar>(bd: &BdMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    bd_solve_observed(bd, b, |_, _| {})
}

/// [`bd_solve`] calling `observer` with the running vector after each factor.
pub fn bd_solve_observed<S: Scalar>(
    bd: &BdMatrix<S>,
    b: &[S],
    mut observer: impl FnMut(SweepStage, &[S]),
) -> Result<Vec<S>> {
    let n = bd.order();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if let Some(index) = (0..n).find(|&i| bd.pivot(i).is_zero()) {
        return Err(Error::Singular { index });
    }
    let mut y = b.to_vec();
    for i in (1..n).rev() {
        // z_r = y_r - m_{r, r-i} z_{r-1}
        for r in i..n {
            let f = bd.lower(r, r - i);
            if !f.is_zero() {
                y[r] = y[r].clone() - f.clone() * y[r - 1].clone();
            }
        }
        observer(SweepStage::Lower(i), &y);
    }
    for (r, yr) in y.iter_mut().enumerate() {
        *yr = yr.clone() / bd.pivot(r).clone();
    }
    observer(SweepStage::Diagonal, &y);
    for i in 1..n {
        for r in (i..n).rev() {
            let g = bd.upper(r, r - i);
            if !g.is_zero() {
                y[r - 1] = y[r - 1].clone() - g.clone() * y[r].clone();
            }
        }
        observer(SweepStage::Upper(i), &y);
    }
    Ok(y)
}

/// Inverse assembled from one solve per unit vector.
pub fn bd_inverse<S: Scalar>(bd: &BdMatrix<S>, exec: Execution) -> Result<Matrix<S>> {
    let n = bd.order();
    let zero = bd.pivot(0).zero_like();
    let columns = exec.map_range(n, |j| {
        let mut e = vec![zero.clone(); n];
        e[j] = zero.one_like();
        bd_solve(bd, &e)
    });
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_fn(n, n, |i, j| columns[j][i].clone()))
}

/// Runs `compute` at 106, 212, ... bits until two consecutive results agree
/// componentwise to relative `tolerance`.
///
/// Returns the values at the higher of the two agreeing precisions, that
/// precision, and the observed relative change.
pub fn ladder(
    start: usize,
    ceiling: usize,
    tolerance: f64,
    mut compute: impl FnMut(usize) -> Result<Vec<BigFloat>>,
) -> Result<(Vec<BigFloat>, usize, f64)> {
    let mut previous: Option<Vec<BigFloat>> = None;
    let mut p = start;
    let mut last_detail = String::from("precision ceiling reached");
    while p <= ceiling {
        match compute(p) {
            Ok(values) => {
                if let Some(prev) = &previous {
                    if prev.len() == values.len() {
                        let change = max_relative_change(prev, &values);
                        if change <= tolerance {
                            return Ok((values, p, change));
                        }
                        last_detail = format!("relative change {change:e} at {p} bits exceeds {tolerance:e}");
                    }
                }
                previous = Some(values);
            }
            Err(Error::NoConvergence { detail, .. }) => {
                last_detail = detail;
                previous = None;
            }
            Err(e) => return Err(e),
        }
        p *= 2;
    }
    Err(Error::NoConvergence { max_precision: p / 2, detail: last_detail })
}

fn max_relative_change(a: &[BigFloat], b: &[BigFloat]) -> f64 {
    a.iter().zip(b).map(|(x, y)| relative_difference(x, y)).fold(0.0, f64::max)
}

fn tolerance(mode: AccuracyMode) -> Option<f64> {
    match mode {
        AccuracyMode::StructuredDouble => None,
        AccuracyMode::CertifiedPrecision { tolerance } => Some(tolerance),
    }
}

fn to_bigfloat_bd<S: Refinable>(bd: &BdMatrix<S>, p: usize) -> BdMatrix<BigFloat> {
    bd.map(|s| s.to_bigfloat(p))
}

/// Solution of `A x = b`.
pub fn tn_solve<S: Refinable>(bd: &BdMatrix<S>, b: &[f64], mode: AccuracyMode) -> Result<Outcome<Vec<f64>>> {
    bd.ensure_valid()?;
    let hra = bd.certificate().is_tp() && sign_pattern(b).is_alternating();
    match tolerance(mode) {
        None => {
            let x = bd_solve(&bd.map(Scalar::to_f64), b)?;
            Ok(Outcome { value: x, precision_bits: 53, error_bound: None, hra })
        }
        Some(tol) => {
            let (x, p, change) = ladder(LADDER_START, LADDER_CEILING, tol, |p| {
                let bp: Vec<BigFloat> = b.iter().map(|v| BigFloat::from_f64(*v, p)).collect();
                bd_solve(&to_bigfloat_bd(bd, p), &bp)
            })?;
            Ok(Outcome { value: x.iter().map(BigFloat::to_f64).collect(), precision_bits: p, error_bound: Some(change), hra })
        }
    }
}

/// Inverse of `A`, column by column.
pub fn tn_inverse<S: Refinable>(bd: &BdMatrix<S>, mode: AccuracyMode) -> Result<Outcome<Matrix<f64>>> {
    bd.ensure_valid()?;
    let hra = bd.certificate().is_tp();
    match tolerance(mode) {
        None => {
            let inv = bd_inverse(&bd.map(Scalar::to_f64), Execution::Parallel)?;
            Ok(Outcome { value: inv, precision_bits: 53, error_bound: None, hra })
        }
        Some(tol) => {
            let n = bd.order();
            let (v, p, change) = ladder(LADDER_START, LADDER_CEILING, tol, |p| {
                Ok(bd_inverse(&to_bigfloat_bd(bd, p), Execution::Parallel)?.into_data())
            })?;
            let inv = Matrix::from_vec(n, n, v.iter().map(BigFloat::to_f64).collect());
            Ok(Outcome { value: inv, precision_bits: p, error_bound: Some(change), hra })
        }
    }
}

fn require_certified(mode: AccuracyMode, what: &str) -> Result<f64> {
    tolerance(mode).ok_or_else(|| Error::UnsupportedMode(format!("{what} needs CertifiedPrecision")))
}

fn sort_descending(v: &mut [f64]) {
    v.sort_by(|a, b| b.total_cmp(a));
}

/// Eigenvalues `(re, im)` packed as `[re_0, im_0, re_1, im_1, ...]`,
/// sorted by decreasing real part.
pub(crate) fn packed_eigenvalues(a: &Matrix<BigFloat>) -> Result<Vec<BigFloat>> {
    let mut ev = dense::eigenvalues(a)?;
    ev.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(y.1.partial_cmp(&x.1).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(ev.into_iter().flat_map(|(re, im)| [re, im]).collect())
}

/// Real parts of packed eigenvalues; fails if an imaginary part survives.
pub(crate) fn real_parts(packed: &[BigFloat]) -> Result<Vec<BigFloat>> {
    let mut out = Vec::with_capacity(packed.len() / 2);
    for pair in packed.chunks(2) {
        if !pair[1].is_zero() {
            return Err(Error::NonRealSpectrum(format!("eigenvalue {} has imaginary part {}", pair[0], pair[1])));
        }
        out.push(pair[0].clone());
    }
    Ok(out)
}

/// All eigenvalues in descending order.
pub fn tn_eigenvalues<S: Refinable>(bd: &BdMatrix<S>, mode: AccuracyMode) -> Result<Outcome<Vec<f64>>> {
    let tol = require_certified(mode, "eigenvalues")?;
    bd.ensure_valid()?;
    if bd.is_lower_triangular() || bd.is_upper_triangular() {
        // triangular: the spectrum is the pivot sequence
        let mut v: Vec<f64> = bd.pivots().iter().map(Scalar::to_f64).collect();
        sort_descending(&mut v);
        return Ok(Outcome { value: v, precision_bits: 53, error_bound: Some(0.0), hra: true });
    }
    let (packed, p, change) = ladder(LADDER_START, LADDER_CEILING, tol, |p| {
        packed_eigenvalues(&to_bigfloat_bd(bd, p).expand())
    })?;
    let mut v: Vec<f64> = real_parts(&packed)?.iter().map(BigFloat::to_f64).collect();
    sort_descending(&mut v);
    Ok(Outcome { value: v, precision_bits: p, error_bound: Some(change), hra: bd.certificate().is_tp() })
}

/// All singular values in descending order.
pub fn tn_singular_values<S: Refinable>(bd: &BdMatrix<S>, mode: AccuracyMode) -> Result<Outcome<Vec<f64>>> {
    let tol = require_certified(mode, "singular values")?;
    bd.ensure_valid()?;
    let (sv, p, change) = ladder(LADDER_START, LADDER_CEILING, tol, |p| {
        dense::singular_values(&to_bigfloat_bd(bd, p).expand())
    })?;
    Ok(Outcome {
        value: sv.iter().map(BigFloat::to_f64).collect(),
        precision_bits: p,
        error_bound: Some(change),
        hra: bd.certificate().is_tp(),
    })
}
