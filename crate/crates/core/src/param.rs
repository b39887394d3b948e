//! Exact parameter expressions such as `sqrt(2)`, `3/2` or `-1+2*sqrt(5)`.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | atom
//! atom  := integer | 'sqrt' '(' integer ')' | '(' expr ')'
//! ```
//!
//! Values evaluate to [`Surd`], from which every scalar domain is reached
//! by correct rounding.

use std::fmt;

use dashu::integer::IBig;

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::surd::Surd;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamExpr {
    Int(IBig),
    Sqrt(u64),
    Neg(Box<ParamExpr>),
    Add(Box<ParamExpr>, Box<ParamExpr>),
    Sub(Box<ParamExpr>, Box<ParamExpr>),
    Mul(Box<ParamExpr>, Box<ParamExpr>),
    Div(Box<ParamExpr>, Box<ParamExpr>),
}

impl ParamExpr {
    pub fn int(v: i64) -> Self {
        ParamExpr::Int(IBig::from(v))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        ParamExpr::Div(Box::new(Self::int(p)), Box::new(Self::int(q)))
    }

    pub fn sqrt(k: u64) -> Self {
        ParamExpr::Sqrt(k)
    }

    /// Expression for an exact surd value.
    pub fn from_surd(s: &Surd) -> Self {
        // Surd's display uses this grammar.
        Self::parse(&s.to_string()).expect("surd display is parseable")
    }

    pub fn from_rational(q: &Rational) -> Self {
        Self::from_surd(&Surd::from_rational(q.clone()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { s: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self) -> Result<Surd> {
        Ok(match self {
            ParamExpr::Int(v) => Surd::from_rational(Rational::from(v.clone())),
            ParamExpr::Sqrt(k) => {
                let k = i64::try_from(*k).map_err(|_| Error::Parse(format!("radicand {k} too large")))?;
                Surd::sqrt_of(k)?
            }
            ParamExpr::Neg(a) => -a.eval()?,
            ParamExpr::Add(a, b) => a.eval()? + b.eval()?,
            ParamExpr::Sub(a, b) => a.eval()? - b.eval()?,
            ParamExpr::Mul(a, b) => a.eval()? * b.eval()?,
            ParamExpr::Div(a, b) => a.eval()?.checked_div(&b.eval()?)?,
        })
    }

    pub fn eval_f64(&self) -> Result<f64> {
        Ok(self.eval()?.to_f64())
    }

    pub fn eval_rational(&self) -> Result<Option<Rational>> {
        Ok(self.eval()?.as_rational())
    }

    pub fn eval_bigfloat(&self, precision: usize) -> Result<BigFloat> {
        Ok(self.eval()?.to_bigfloat(precision))
    }

    fn precedence(&self) -> u8 {
        match self {
            ParamExpr::Add(..) | ParamExpr::Sub(..) => 1,
            ParamExpr::Mul(..) | ParamExpr::Div(..) => 2,
            ParamExpr::Neg(_) => 3,
            _ => 4,
        }
    }
}

impl std::str::FromStr for ParamExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ParamExpr::parse(s)
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &ParamExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            ParamExpr::Int(v) => write!(f, "{v}"),
            ParamExpr::Sqrt(k) => write!(f, "sqrt({k})"),
            ParamExpr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, 3)
            }
            ParamExpr::Add(a, b) => {
                wrap(f, a, 1)?;
                f.write_str("+")?;
                wrap(f, b, 2)
            }
            ParamExpr::Sub(a, b) => {
                wrap(f, a, 1)?;
                f.write_str("-")?;
                wrap(f, b, 2)
            }
            ParamExpr::Mul(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("*")?;
                wrap(f, b, 3)
            }
            ParamExpr::Div(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("/")?;
                wrap(f, b, 3)
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ParamExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = ParamExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = ParamExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ParamExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = ParamExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = ParamExpr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ParamExpr> {
        if self.eat(b'-') {
            return Ok(ParamExpr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn integer(&mut self) -> Result<IBig> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| self.error("bad integer"))
    }

    fn atom(&mut self) -> Result<ParamExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(ParamExpr::Int(self.integer()?)),
            Some(b's') if self.s[self.pos..].starts_with(b"sqrt") => {
                self.pos += 4;
                if !self.eat(b'(') {
                    return Err(self.error("expected '(' after sqrt"));
                }
                let k = self.integer()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                let k = u64::try_from(k).map_err(|_| self.error("radicand out of range"))?;
                Ok(ParamExpr::Sqrt(k))
            }
            _ => Err(self.error("expected a number, sqrt(k) or '('")),
        }
    }
}
