//! Tagged matrix families with exact parameters.
//!
//! Text syntax: `<kind>:<key>=<expr>,...` with kinds
//!
//! | kind      | keys                         |
//! |-----------|------------------------------|
//! | `pnl`     | `x`, `lambda`                |
//! | `pnlxya`  | `x`, `y`, `lambda`, `a`      |
//! | `lattice` | `alpha`, `beta`, `gamma`     |
//! | `pxy`, `r`, `phi`, `psi` | `x`, `y`      |
//!
//! `a` is a `;`-separated list and defaults to all ones.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::bd::BdMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::param::ParamExpr;
use crate::pascal::{
    bd_classic, bd_lattice, bd_pnl, bd_pnl_xya, classic_lattice_params, dense_classic, dense_lattice, dense_pnl,
    dense_pnl_xya, is_tp_pnl, pnl_xya_scaling, ClassicKind,
};
use crate::scalar::{Rational, Sign};
use crate::surd::Surd;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Pnl { x: ParamExpr, lambda: ParamExpr },
    PnlXya { x: ParamExpr, y: ParamExpr, lambda: ParamExpr, a: Option<Vec<ParamExpr>> },
    Lattice { alpha: ParamExpr, beta: ParamExpr, gamma: ParamExpr },
    Classic { kind: ClassicKind, x: ParamExpr, y: ParamExpr },
}

/// A family together with its size `n` (order `n + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Pnl { .. } => "pnl",
            Family::PnlXya { .. } => "pnlxya",
            Family::Lattice { .. } => "lattice",
            Family::Classic { kind, .. } => kind.name(),
        }
    }

    /// Parameter list in the text syntax, without the kind prefix.
    pub fn params(&self) -> String {
        match self {
            Family::Pnl { x, lambda } => format!("x={x},lambda={lambda}"),
            Family::PnlXya { x, y, lambda, a } => {
                let mut s = format!("x={x},y={y},lambda={lambda}");
                if let Some(a) = a {
                    let items: Vec<String> = a.iter().map(ToString::to_string).collect();
                    s.push_str(&format!(",a={}", items.join(";")));
                }
                s
            }
            Family::Lattice { alpha, beta, gamma } => format!("alpha={alpha},beta={beta},gamma={gamma}"),
            Family::Classic { x, y, .. } => format!("x={x},y={y}"),
        }
    }

    pub fn with_n(self, n: usize) -> FamilySpec {
        FamilySpec { family: self, n }
    }

    fn exprs(&self) -> Vec<&ParamExpr> {
        match self {
            Family::Pnl { x, lambda } => vec![x, lambda],
            Family::PnlXya { x, y, lambda, a } => {
                let mut v = vec![x, y, lambda];
                if let Some(a) = a {
                    v.extend(a.iter());
                }
                v
            }
            Family::Lattice { alpha, beta, gamma } => vec![alpha, beta, gamma],
            Family::Classic { x, y, .. } => vec![x, y],
        }
    }

    /// True when every parameter is a rational number.
    pub fn is_rational(&self) -> bool {
        self.exprs().iter().all(|e| e.eval().map(|s| s.is_rational()).unwrap_or(false))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name(), self.params())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={})", self.family, self.n)
    }
}

/// Splits `k=v,k=v` at top-level commas (commas never appear inside expressions).
fn key_values(body: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {item:?}")))?;
        if map.insert(k.trim().to_ascii_lowercase(), v.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("duplicate key {k:?}")));
        }
    }
    Ok(map)
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, body) = text.split_once(':').unwrap_or((text, ""));
        let kind = kind.trim().to_ascii_lowercase();
        let mut kv = key_values(body)?;
        let mut take = |key: &str| -> Result<ParamExpr> {
            let v = kv.remove(key).ok_or_else(|| Error::Parse(format!("{kind}: missing parameter {key:?}")))?;
            ParamExpr::parse(&v)
        };
        let family = match kind.as_str() {
            "pnl" => Family::Pnl { x: take("x")?, lambda: take("lambda")? },
            "pnlxya" => {
                let (x, y, lambda) = (take("x")?, take("y")?, take("lambda")?);
                let a = match kv.remove("a") {
                    Some(list) => Some(list.split(';').map(ParamExpr::parse).collect::<Result<Vec<_>>>()?),
                    None => None,
                };
                Family::PnlXya { x, y, lambda, a }
            }
            "lattice" | "lp" => Family::Lattice { alpha: take("alpha")?, beta: take("beta")?, gamma: take("gamma")? },
            other => {
                let kind = match other {
                    "pxy" | "p" => ClassicKind::Pxy,
                    "r" | "rxy" => ClassicKind::Rxy,
                    "phi" => ClassicKind::Phi,
                    "psi" => ClassicKind::Psi,
                    _ => return Err(Error::Parse(format!("unknown family kind {other:?}"))),
                };
                Family::Classic { kind, x: take("x")?, y: take("y")? }
            }
        };
        if let Some(k) = kv.keys().next() {
            return Err(Error::Parse(format!("unexpected parameter {k:?} for {}", family.name())));
        }
        Ok(family)
    }
}

/// Exact parameter values of a family.
#[derive(Clone, Debug)]
enum Values {
    Pnl { x: Surd, lambda: Surd },
    PnlXya { x: Surd, y: Surd, lambda: Surd, a: Vec<Surd> },
    Lattice { alpha: Surd, beta: Surd, gamma: Surd },
    Classic { kind: ClassicKind, x: Surd, y: Surd },
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> Self {
        FamilySpec { family, n }
    }

    pub fn order(&self) -> usize {
        self.n + 1
    }

    fn values(&self) -> Result<Values> {
        Ok(match &self.family {
            Family::Pnl { x, lambda } => Values::Pnl { x: x.eval()?, lambda: lambda.eval()? },
            Family::PnlXya { x, y, lambda, a } => {
                let a = match a {
                    Some(a) => a.iter().map(ParamExpr::eval).collect::<Result<Vec<_>>>()?,
                    None => vec![Surd::from_i64(1); self.n + 1],
                };
                Values::PnlXya { x: x.eval()?, y: y.eval()?, lambda: lambda.eval()?, a }
            }
            Family::Lattice { alpha, beta, gamma } => {
                Values::Lattice { alpha: alpha.eval()?, beta: beta.eval()?, gamma: gamma.eval()? }
            }
            Family::Classic { kind, x, y } => Values::Classic { kind: *kind, x: x.eval()?, y: y.eval()? },
        })
    }

    /// Closed-form decomposition with exact entries.
    pub fn bd_exact(&self) -> Result<BdMatrix<Surd>> {
        let n = self.n;
        match self.values()? {
            Values::Pnl { x, lambda } => bd_pnl(&x, &lambda, n),
            Values::PnlXya { x, y, lambda, a } => bd_pnl_xya(&x, &y, &lambda, &a, n),
            Values::Lattice { alpha, beta, gamma } => bd_lattice(&alpha, &beta, &gamma, n),
            Values::Classic { kind, x, y } => bd_classic(kind, &x, &y, n),
        }
    }

    /// Dense matrix from the definitional formulas, exactly.
    pub fn dense_exact(&self) -> Result<Matrix<Surd>> {
        let n = self.n;
        match self.values()? {
            Values::Pnl { x, lambda } => Ok(dense_pnl(&x, &lambda, n)),
            Values::PnlXya { x, y, lambda, a } => dense_pnl_xya(&x, &y, &lambda, &a, n),
            Values::Lattice { alpha, beta, gamma } => Ok(dense_lattice(&alpha, &beta, &gamma, n)),
            Values::Classic { kind, x, y } => dense_classic(kind, &x, &y, n),
        }
    }

    /// Dense matrix with every entry correctly rounded to binary64.
    pub fn dense_f64(&self) -> Result<Matrix<f64>> {
        Ok(self.dense_exact()?.map(Surd::to_f64))
    }

    /// The dense matrix as rationals, when every entry is rational.
    pub fn dense_rational(&self) -> Result<Option<Matrix<Rational>>> {
        let m = self.dense_exact()?;
        if m.data().iter().all(Surd::is_rational) {
            Ok(Some(m.map(|s| s.as_rational().expect("rational"))))
        } else {
            Ok(None)
        }
    }

    /// Whether the closed-form decomposition is guaranteed to high relative accuracy.
    pub fn is_hra_certified(&self) -> bool {
        let Ok(values) = self.values() else {
            return false;
        };
        let pos = |s: &Surd| s.sign() == Sign::Positive;
        match values {
            Values::Lattice { alpha, beta, gamma } => pos(&alpha) && pos(&beta) && gamma.sign() != Sign::Negative,
            Values::Classic { kind: ClassicKind::Rxy, x, y } => pos(&x) && pos(&y),
            Values::Classic { kind: ClassicKind::Psi, x, y } => pos(&(x * y)),
            Values::Classic { .. } => false,
            Values::Pnl { x, lambda } => is_tp_pnl(&x, &lambda, self.n),
            Values::PnlXya { x, y, lambda, a } => {
                is_tp_pnl(&x, &lambda, self.n)
                    && pnl_xya_scaling(&y, &lambda, &a, self.n).map(|d| d.iter().all(pos)).unwrap_or(false)
            }
        }
    }

    /// Lattice parameters for the lattice and classical kinds.
    pub fn lattice_params(&self) -> Result<Option<(Surd, Surd, Surd)>> {
        Ok(match self.values()? {
            Values::Lattice { alpha, beta, gamma } => Some((alpha, beta, gamma)),
            Values::Classic { kind, x, y } => Some(classic_lattice_params(kind, &x, &y)?),
            _ => None,
        })
    }
}
