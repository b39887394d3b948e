//! Accuracy experiments: every method is scored against the oracle for a
//! family over a list of sizes.

mod config;
mod report;

pub use config::ExperimentConfig;
pub use report::{emit_csv, emit_plot, parse_csv, ErrorReport, ErrorRow};

use std::fmt;
use std::str::FromStr;

use rand::RngExt;
use rand_pcg::Pcg32;
use serde::{Deserialize, Serialize};

use crate::bigfloat::BigFloat;
use crate::dense;
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::oracle::{self, relative_error, relative_errors, OracleResult, Query};
use crate::par::Execution;
use crate::tn::{self, AccuracyMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    MinEig,
    MinSv,
    Inverse,
    SolveAlternating,
    SolveMixed,
}

impl Quantity {
    pub const ALL: [Quantity; 5] =
        [Quantity::MinEig, Quantity::MinSv, Quantity::Inverse, Quantity::SolveAlternating, Quantity::SolveMixed];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::MinEig => "min_eig",
            Quantity::MinSv => "min_sv",
            Quantity::Inverse => "inverse",
            Quantity::SolveAlternating => "solve_alternating",
            Quantity::SolveMixed => "solve_mixed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Conventional,
    Accurate,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Conventional, Method::Accurate, Method::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Conventional => "conventional",
            Method::Accurate => "accurate",
            Method::Oracle => "oracle",
        }
    }
}

macro_rules! named_enum {
    ($ty:ty) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                let s = s.trim();
                <$ty>::ALL
                    .into_iter()
                    .find(|v| v.name() == s)
                    .ok_or_else(|| Error::Parse(format!("unknown {} {s:?}", stringify!($ty).to_lowercase())))
            }
        }
    };
}

named_enum!(Quantity);
named_enum!(Method);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsMode {
    /// Magnitudes in `[1, max]`, signs `+, -, +, ...`.
    Alternating,
    /// Uniform in `[-max, max]`.
    Mixed,
}

/// Default bound of right-hand side entries.
pub const RHS_MAX: i64 = 1000;

/// PCG stream selector, fixed so that only the seed varies.
const PCG_STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

/// Random integer right-hand side from PCG32 (`pcg32`: 64-bit LCG state,
/// xorshift-high / random-rotate output).
pub fn gen_rhs(n: usize, seed: u64, mode: RhsMode) -> Vec<i64> {
    gen_rhs_bounded(n, seed, mode, RHS_MAX)
}

pub fn gen_rhs_bounded(n: usize, seed: u64, mode: RhsMode, max: i64) -> Vec<i64> {
    let mut rng = Pcg32::new(seed, PCG_STREAM);
    (0..n)
        .map(|i| match mode {
            RhsMode::Alternating => {
                let m = rng.random_range(1..=max);
                if i % 2 == 0 {
                    m
                } else {
                    -m
                }
            }
            RhsMode::Mixed => rng.random_range(-max..=max),
        })
        .collect()
}

/// Per-method outcome of one cell before it becomes rows.
struct Scored {
    value: f64,
    reference: f64,
    mean: f64,
    max: f64,
}

impl Scored {
    fn failed(reference: f64) -> Self {
        Scored { value: f64::INFINITY, reference, mean: f64::INFINITY, max: f64::INFINITY }
    }
}

fn score(approx: &[f64], reference: &OracleResult) -> Result<Scored> {
    let stats = relative_errors(approx, reference)?;
    let k = stats.argmax().ok_or_else(|| Error::ShapeMismatch("empty result".into()))?;
    Ok(Scored { value: approx[k], reference: reference.values[k].to_f64(), mean: stats.mean, max: stats.max })
}

/// Smallest element of a descending spectrum.
fn smallest(reference: &OracleResult) -> Result<&BigFloat> {
    reference.last().ok_or_else(|| Error::ShapeMismatch("empty spectrum".into()))
}

fn score_min(approx: f64, reference: &OracleResult) -> Result<Scored> {
    let r = smallest(reference)?;
    let e = relative_error(approx, r);
    Ok(Scored { value: approx, reference: r.to_f64(), mean: e, max: e })
}

/// Eigenvalue with the smallest real part; a complex value is scored by
/// the modulus of its distance to the reference.
fn score_conventional_eig(ev: &[(f64, f64)], reference: &OracleResult) -> Result<Scored> {
    let &(re, im) = ev
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::ShapeMismatch("empty spectrum".into()))?;
    let mut s = score_min(re, reference)?;
    if im != 0.0 {
        let r = smallest(reference)?.to_f64();
        let e = (re - r).hypot(im) / r.abs();
        s.mean = e;
        s.max = e;
    }
    Ok(s)
}

struct Cell {
    n: usize,
    quantity: Quantity,
}

fn rhs_for(cfg: &ExperimentConfig, order: usize, quantity: Quantity) -> Option<Vec<f64>> {
    let mode = match quantity {
        Quantity::SolveAlternating => RhsMode::Alternating,
        Quantity::SolveMixed => RhsMode::Mixed,
        _ => return None,
    };
    Some(gen_rhs_bounded(order, cfg.seed, mode, cfg.rhs_max).into_iter().map(|v| v as f64).collect())
}

fn query_for(quantity: Quantity, b: Option<&Vec<f64>>) -> Query {
    match quantity {
        Quantity::MinEig => Query::Eigenvalues,
        Quantity::MinSv => Query::SingularValues,
        Quantity::Inverse => Query::Inverse,
        Quantity::SolveAlternating | Quantity::SolveMixed => Query::Solve(b.cloned().unwrap_or_default()),
    }
}

fn conventional(spec: &FamilySpec, quantity: Quantity, b: Option<&Vec<f64>>, reference: &OracleResult) -> Result<Scored> {
    let a = spec.dense_f64()?;
    match quantity {
        Quantity::MinEig => score_conventional_eig(&dense::eigenvalues(&a)?, reference),
        Quantity::MinSv => {
            let sv = dense::singular_values(&a)?;
            score_min(*sv.last().expect("nonempty"), reference)
        }
        Quantity::Inverse => score(dense::lu_inverse(&a)?.data(), reference),
        Quantity::SolveAlternating | Quantity::SolveMixed => {
            score(&dense::lu_solve(&a, b.expect("rhs"))?, reference)
        }
    }
}

/// Certified ladders for spectra; sweeps for solves; the inverse sweeps in
/// binary64 when the family is certified and climbs the ladder otherwise.
fn accurate(spec: &FamilySpec, quantity: Quantity, b: Option<&Vec<f64>>, tol: f64, reference: &OracleResult) -> Result<Scored> {
    let bd = spec.bd_exact()?;
    let certified = AccuracyMode::certified_with(tol)?;
    match quantity {
        Quantity::MinEig => {
            let ev = tn::tn_eigenvalues(&bd, certified)?;
            score_min(*ev.value.last().expect("nonempty"), reference)
        }
        Quantity::MinSv => {
            let sv = tn::tn_singular_values(&bd, certified)?;
            score_min(*sv.value.last().expect("nonempty"), reference)
        }
        Quantity::Inverse => {
            let mode = if spec.is_hra_certified() { AccuracyMode::StructuredDouble } else { certified };
            score(tn::tn_inverse(&bd, mode)?.value.data(), reference)
        }
        Quantity::SolveAlternating | Quantity::SolveMixed => {
            score(&tn::tn_solve(&bd, b.expect("rhs"), AccuracyMode::StructuredDouble)?.value, reference)
        }
    }
}

fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> Vec<ErrorRow> {
    let spec = cfg.family.clone().with_n(cell.n);
    let b = rhs_for(cfg, spec.order(), cell.quantity);
    let reference = oracle::oracle(&spec, &query_for(cell.quantity, b.as_ref()), cfg.digits);
    cfg.methods
        .iter()
        .map(|&method| {
            let scored = match &reference {
                Err(_) => Scored::failed(f64::NAN),
                Ok(r) => {
                    let outcome = match method {
                        Method::Conventional => conventional(&spec, cell.quantity, b.as_ref(), r),
                        Method::Accurate => accurate(&spec, cell.quantity, b.as_ref(), cfg.tolerance, r),
                        Method::Oracle => oracle_self(cell.quantity, r),
                    };
                    outcome.unwrap_or_else(|_| Scored::failed(headline(cell.quantity, r)))
                }
            };
            ErrorRow {
                family: cfg.family.name().to_string(),
                params: cfg.family.params(),
                n: cell.n,
                quantity: cell.quantity,
                method,
                value: scored.value,
                reference: scored.reference,
                rel_err_mean: scored.mean,
                rel_err_max: scored.max,
                seed: cfg.seed,
            }
        })
        .collect()
}

/// Reference entry reported for a failed row.
fn headline(quantity: Quantity, r: &OracleResult) -> f64 {
    match quantity {
        Quantity::MinEig | Quantity::MinSv => r.last().map(BigFloat::to_f64).unwrap_or(f64::NAN),
        _ => r.values.first().map(BigFloat::to_f64).unwrap_or(f64::NAN),
    }
}

/// The oracle scored against itself: zero error by construction.
fn oracle_self(quantity: Quantity, r: &OracleResult) -> Result<Scored> {
    let v = headline(quantity, r);
    Ok(Scored { value: v, reference: v, mean: 0.0, max: 0.0 })
}

/// One row per `(n, quantity, method)`, sorted in that order. Failures are
/// recorded as infinite errors and never abort the run.
pub fn run_experiment(cfg: &ExperimentConfig, exec: Execution) -> Result<ErrorReport> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &n in &cfg.sizes {
        for &quantity in &cfg.quantities {
            cells.push(Cell { n, quantity });
        }
    }
    let rows = exec.map_range(cells.len(), |k| run_cell(cfg, &cells[k]));
    let mut rows: Vec<ErrorRow> = rows.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.n, r.quantity, r.method));
    Ok(ErrorReport { rows })
}
