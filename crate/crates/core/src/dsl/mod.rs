//! Function language: parsing, printing, tagged point evaluation, interval
//! enclosures and sampling.

mod ast;
mod enclose;
mod eval;
mod parse;
mod rational;
mod sample;
mod trig;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use once_cell::sync::Lazy;
use serde::Serialize;

pub use ast::{Atom, Exponent, Expr};
pub use enclose::Bound;
pub use eval::{Rationality, Value};
pub use parse::parse_expr;
pub use rational::{simplest_rational, smallest_denominator};
pub use sample::sample_points;
pub use trig::{cos_enclosure, pi_bounds, sin_enclosure};

use crate::error::{Error, EvalError, ParseError};
use crate::exact::Scalar;
use crate::sets::{Interval, IntervalSet};

/// Consecutive Pell convergents `lo < sqrt(2) < hi` with denominators
/// beyond 2^128; `lo` or `hi` doubles as the surrogate value.
pub(crate) struct Sqrt2 {
    pub surrogate: Scalar,
    pub lo: Scalar,
    pub hi: Scalar,
}

pub(crate) static SQRT2: Lazy<Sqrt2> = Lazy::new(|| {
    let limit = BigInt::one() << 128usize;
    let (mut p, mut q) = (BigInt::one(), BigInt::one());
    while q <= limit {
        let np = &p + &q * 2;
        let nq = &p + &q;
        p = np;
        q = nq;
    }
    let a = Scalar::from_parts(p.clone(), q.clone()).expect("q > 0");
    let b = Scalar::from_parts(&p + &q * 2, &p + &q).expect("q > 0");
    let (lo, hi) = if a < b { (a.clone(), b) } else { (b, a.clone()) };
    Sqrt2 { surrogate: a, lo, hi }
});

/// Which kind of real a sample point stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    Rational,
    /// `base + coeff * sqrt(2)` with `coeff != 0`.
    Irrational { base: Scalar, coeff: Scalar },
}

/// A point fed to [`FuncDef::eval`]: either an exact rational or a tagged
/// irrational carrying its rational surrogate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SamplePoint {
    pub value: Scalar,
    pub tag: Tag,
}

impl SamplePoint {
    pub fn rational(x: Scalar) -> Self {
        SamplePoint { value: x, tag: Tag::Rational }
    }

    /// `base + coeff * sqrt(2)`; rational when `coeff` is zero.
    pub fn sqrt2_affine(base: Scalar, coeff: Scalar) -> Self {
        if coeff.is_zero() {
            return Self::rational(base);
        }
        let value = &base + &(&coeff * &SQRT2.surrogate);
        SamplePoint { value, tag: Tag::Irrational { base, coeff } }
    }

    pub fn sqrt2() -> Self {
        Self::sqrt2_affine(Scalar::zero(), Scalar::one())
    }

    pub fn is_rational(&self) -> bool {
        self.tag == Tag::Rational
    }

    /// Accepts a rational, or `a + b*sqrt2` style text such as `sqrt2`,
    /// `3*sqrt2`, `1/2 - sqrt2`.
    pub fn parse(src: &str) -> Result<Self, Error> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Input(format!("cannot parse point {src:?}"));
        let Some(idx) = s.find("sqrt2") else {
            return Ok(Self::rational(Scalar::parse(&s).map_err(|_| bad())?));
        };
        if idx + 5 != s.len() {
            return Err(bad());
        }
        let head = &s[..idx];
        let head = head.strip_suffix('*').unwrap_or(head);
        // split base and coefficient at the last top-level sign
        let split = head.char_indices().rev().find(|&(i, c)| (c == '+' || c == '-') && i > 0).map(|(i, _)| i);
        let (base, coeff) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let base = if base.is_empty() { Scalar::zero() } else { Scalar::parse(base).map_err(|_| bad())? };
        let coeff = match coeff {
            "" | "+" => Scalar::one(),
            "-" => -Scalar::one(),
            c => Scalar::parse(c.strip_prefix('+').unwrap_or(c)).map_err(|_| bad())?,
        };
        if coeff.is_zero() {
            return Err(bad());
        }
        Ok(Self::sqrt2_affine(base, coeff))
    }
}

impl fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            Tag::Rational => write!(f, "{}", self.value),
            Tag::Irrational { base, coeff } if base.is_zero() => {
                if *coeff == Scalar::one() {
                    write!(f, "sqrt2")
                } else {
                    write!(f, "{coeff}*sqrt2")
                }
            }
            Tag::Irrational { base, coeff } => {
                if coeff.is_negative() {
                    write!(f, "{base} - {}*sqrt2", -coeff)
                } else {
                    write!(f, "{base} + {coeff}*sqrt2")
                }
            }
        }
    }
}

impl Serialize for SamplePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A parsed function with its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncDef {
    pub expr: Expr,
    pub domain: IntervalSet,
    pub var: String,
}

impl FuncDef {
    pub fn new(expr: Expr) -> Self {
        FuncDef { expr, domain: IntervalSet::reals(), var: "x".into() }
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        Ok(Self::new(parse_expr(src, "x", false)?))
    }

    /// Formula in the sequence index `n`, where `^n` exponents are allowed.
    pub fn parse_sequence(src: &str) -> Result<Self, ParseError> {
        Ok(FuncDef { expr: parse_expr(src, "n", true)?, domain: IntervalSet::reals(), var: "n".into() })
    }

    pub fn with_domain(mut self, domain: IntervalSet) -> Result<Self, Error> {
        if domain.is_empty() {
            return Err(Error::Precondition("function domain must be nonempty".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn eval(&self, p: &SamplePoint) -> Result<Value, EvalError> {
        if !self.domain.contains(&p.value) {
            return Err(EvalError::DomainViolation(p.to_string()));
        }
        eval::eval(&self.expr, p)
    }

    pub fn eval_rational(&self, x: &Scalar) -> Result<Value, EvalError> {
        self.eval(&SamplePoint::rational(x.clone()))
    }

    pub fn enclose(&self, iv: &Interval) -> Result<Bound, EvalError> {
        if !self.domain.contains_interval(iv) {
            return Err(EvalError::DomainViolation(iv.to_string()));
        }
        Ok(enclose::enclose(&self.expr, iv))
    }

    /// Certified lower bound on the oscillation of `f` over every
    /// nondegenerate subinterval of `iv`.
    pub fn oscillation_floor(&self, iv: &Interval) -> Option<Scalar> {
        if !self.domain.contains_interval(iv) {
            return None;
        }
        enclose::oscillation_floor(&self.expr, iv)
    }

    /// Used by derived functions: the expression is already in `x`.
    pub fn map_expr(&self, expr: Expr) -> FuncDef {
        FuncDef { expr, domain: self.domain.clone(), var: self.var.clone() }
    }

    pub fn uses_arithmetic_atoms(&self) -> bool {
        self.expr.uses_atom(&|a| a.is_arithmetic())
    }
}

impl fmt::Display for FuncDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr.display_with(&self.var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_bracket() {
        let s = &*SQRT2;
        assert!(s.lo < s.hi);
        assert!(s.lo.square() < Scalar::from_int(2));
        assert!(s.hi.square() > Scalar::from_int(2));
        assert!(s.surrogate == s.lo || s.surrogate == s.hi);
        assert!(&s.hi - &s.lo < Scalar::pow2_inv(250));
    }

    #[test]
    fn point_text() {
        for t in ["sqrt2", "3*sqrt2", "1/2 - sqrt2", "1/2 + 2/3*sqrt2", "-sqrt2", "7/3"] {
            let p = SamplePoint::parse(t).unwrap();
            assert_eq!(SamplePoint::parse(&p.to_string()).unwrap(), p, "{t}");
        }
        assert!(!SamplePoint::parse("sqrt2").unwrap().is_rational());
        assert!(SamplePoint::parse("0*sqrt2").is_err());
        assert!(SamplePoint::parse("sqrt2x").is_err());
    }
}
