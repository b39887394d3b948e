//! JSON codec for [`BdMatrix`].
//!
//! ```json
//! {"order": 2, "pivots": ["1", "1"],
//!  "lower": [{"i": 2, "j": 1, "v": "1"}],
//!  "upper": [{"i": 2, "j": 1, "v": "1"}],
//!  "certificate": "stp"}
//! ```
//!
//! Indices are 1-based. Every multiplier is written; on input, missing
//! entries read as zero.

use serde::{Deserialize, Serialize};

use super::{BdMatrix, Certificate};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::param::ParamExpr;
use crate::scalar::{Rational, Scalar};
use crate::surd::Surd;

pub const CERTIFICATE_NAMES: [&str; 3] = ["stp", "tp", "unclassified"];

/// Lossless text form of a scalar.
pub trait BdText: Scalar {
    fn encode(&self) -> String;
    fn decode(s: &str) -> Result<Self>;
}

impl BdText for f64 {
    /// Shortest decimal that parses back to the same bits.
    fn encode(&self) -> String {
        format!("{self:?}")
    }

    fn decode(s: &str) -> Result<Self> {
        if let Ok(v) = s.trim().parse::<f64>() {
            return Ok(v);
        }
        let q = Rational::decode(s)?;
        Ok(Scalar::to_f64(&q))
    }
}

impl BdText for Rational {
    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(q) = s.parse::<Rational>() {
            return Ok(q);
        }
        // plain decimals such as "0.25" or "1e-3"
        if is_decimal(s) && s.parse::<f64>().is_ok() {
            return decimal_to_rational(s);
        }
        Err(Error::Parse(format!("not a rational: {s:?}")))
    }
}

impl BdText for Surd {
    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(s: &str) -> Result<Self> {
        ParamExpr::parse(s)?.eval()
    }
}

fn is_decimal(s: &str) -> bool {
    s.chars().all(|c| c.is_ascii_digit() || matches!(c, '-' | '+' | '.' | 'e' | 'E'))
}

/// Exact value of a decimal literal like `-1.25e-3`.
fn decimal_to_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad decimal {s:?}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let num: dashu::integer::IBig = digits.parse().map_err(|_| bad())?;
    let e = exp - frac_part.len() as i64;
    let ten = dashu::integer::IBig::from(10u8);
    Ok(if e >= 0 {
        Rational::from(num * ten.pow(e as usize))
    } else {
        Rational::from(num) / Rational::from(ten.pow((-e) as usize))
    })
}

#[derive(Serialize, Deserialize)]
struct Entry {
    i: usize,
    j: usize,
    v: String,
}

#[derive(Serialize, Deserialize)]
struct Doc {
    order: usize,
    pivots: Vec<String>,
    #[serde(default)]
    lower: Vec<Entry>,
    #[serde(default)]
    upper: Vec<Entry>,
    certificate: String,
}

impl<S: BdText> BdMatrix<S> {
    pub fn to_json(&self) -> String {
        let n = self.order();
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for i in 1..n {
            for j in 0..i {
                lower.push(Entry { i: i + 1, j: j + 1, v: self.lower(i, j).encode() });
                upper.push(Entry { i: i + 1, j: j + 1, v: self.upper(i, j).encode() });
            }
        }
        let doc = Doc {
            order: n,
            pivots: (0..n).map(|i| self.pivot(i).encode()).collect(),
            lower,
            upper,
            certificate: self.certificate().to_string(),
        };
        serde_json::to_string_pretty(&doc).expect("BD document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Doc = serde_json::from_str(text)?;
        let n = doc.order;
        if n == 0 || doc.pivots.len() != n {
            return Err(Error::Parse(format!("order {n} does not match {} pivots", doc.pivots.len())));
        }
        let pivots = doc.pivots.iter().map(|s| S::decode(s)).collect::<Result<Vec<_>>>()?;
        let zero = pivots[0].zero_like();
        let mut array = Matrix::from_fn(n, n, |i, j| if i == j { pivots[i].clone() } else { zero.clone() });
        for (entries, upper) in [(&doc.lower, false), (&doc.upper, true)] {
            for e in entries {
                if e.j == 0 || e.i <= e.j || e.i > n {
                    return Err(Error::Parse(format!("multiplier index ({}, {}) out of range", e.i, e.j)));
                }
                let (r, c) = if upper { (e.j - 1, e.i - 1) } else { (e.i - 1, e.j - 1) };
                array[(r, c)] = S::decode(&e.v)?;
            }
        }
        let certificate = match doc.certificate.as_str() {
            "stp" => Certificate::Stp,
            "tp" => Certificate::NonsingularTp,
            "unclassified" => Certificate::Unclassified,
            other => return Err(Error::Parse(format!("unknown certificate {other:?}"))),
        };
        BdMatrix::from_array(array, certificate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let third = Rational::from_parts(1.into(), 3u8.into());
        let bd = BdMatrix::from_fn(
            &[Rational::from(1), Rational::from(7)],
            |_, _| third.clone(),
            |_, _| -Rational::from(5),
        )
        .unwrap();
        let text = bd.to_json();
        assert!(text.contains("\"1/3\""));
        assert_eq!(BdMatrix::<Rational>::from_json(&text).unwrap(), bd);
    }

    #[test]
    fn f64_round_trip_bits() {
        let bd = BdMatrix::from_fn(&[0.1, std::f64::consts::PI], |_, _| 1e-300, |_, _| 2.0f64.sqrt()).unwrap();
        assert_eq!(BdMatrix::<f64>::from_json(&bd.to_json()).unwrap(), bd);
    }

    #[test]
    fn missing_entries_are_zero() {
        let text = r#"{"order":2,"pivots":["2","3"],"certificate":"tp"}"#;
        let bd = BdMatrix::<Rational>::from_json(text).unwrap();
        assert_eq!(bd.expand(), Matrix::diagonal(&[Rational::from(2), Rational::from(3)]));
    }

    #[test]
    fn decimal_strings() {
        assert_eq!(Rational::decode("0.25").unwrap(), Rational::from_parts(1.into(), 4u8.into()));
        assert_eq!(Rational::decode("-15e-1").unwrap(), Rational::from_parts((-3).into(), 2u8.into()));
        assert!(Rational::decode("abc").is_err());
    }
}
