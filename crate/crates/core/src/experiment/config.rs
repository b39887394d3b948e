use std::path::PathBuf;

use super::{Method, Quantity, RHS_MAX};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::oracle::{DEFAULT_DIGITS, MAX_DIGITS};
use crate::tn::{AccuracyMode, DEFAULT_TOLERANCE};

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Family template; the size comes from `sizes`.
    pub family: Family,
    pub sizes: Vec<usize>,
    pub quantities: Vec<Quantity>,
    pub methods: Vec<Method>,
    pub seed: u64,
    /// Right-hand sides have entries bounded by this in absolute value.
    pub rhs_max: i64,
    /// Oracle digits.
    pub digits: usize,
    /// Certified-precision tolerance of the accurate method.
    pub tolerance: f64,
    pub csv: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: "lattice:alpha=sqrt(2),beta=sqrt(3),gamma=sqrt(5)".parse().expect("default family"),
            sizes: (1..=10).map(|k| 5 * k).collect(),
            quantities: Quantity::ALL.to_vec(),
            methods: Method::ALL.to_vec(),
            seed: 1,
            rhs_max: RHS_MAX,
            digits: DEFAULT_DIGITS,
            tolerance: DEFAULT_TOLERANCE,
            csv: None,
            plot: None,
        }
    }
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(item).collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

/// `5,10,20` or `start:end:step` ranges, mixed freely.
fn parse_sizes(value: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [n] => out.push(parse_num("sizes", n)?),
            [a, b] | [a, b, _] => {
                let (a, b): (usize, usize) = (parse_num("sizes", a)?, parse_num("sizes", b)?);
                let step: usize = if parts.len() == 3 { parse_num("sizes", parts[2])? } else { 1 };
                if step == 0 {
                    return Err(Error::Config("sizes: zero step".into()));
                }
                out.extend((a..=b).step_by(step));
            }
            _ => return Err(Error::Config(format!("sizes: bad item {item:?}"))),
        }
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim().trim_matches('"');
        match key.trim() {
            "family" => self.family = value.parse()?,
            "sizes" => self.sizes = parse_sizes(value)?,
            "quantities" => self.quantities = parse_list(value, str::parse)?,
            "methods" => self.methods = parse_list(value, str::parse)?,
            "seed" => self.seed = parse_num(key, value)?,
            "rhs_max" => self.rhs_max = parse_num(key, value)?,
            "digits" => self.digits = parse_num(key, value)?,
            "tolerance" => self.tolerance = parse_num(key, value)?,
            "csv" => self.csv = Some(PathBuf::from(value)),
            "plot" => self.plot = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// `key = value` lines over the defaults; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::Config("sizes must be a nonempty list of positive integers".into()));
        }
        if self.rhs_max < 1 {
            return Err(Error::Config("rhs_max must be at least 1".into()));
        }
        if self.digits == 0 || self.digits > MAX_DIGITS {
            return Err(Error::Config(format!("digits must lie in 1..={MAX_DIGITS}")));
        }
        AccuracyMode::certified_with(self.tolerance)?;
        Ok(())
    }
}
