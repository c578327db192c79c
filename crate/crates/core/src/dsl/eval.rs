use std::cmp::Ordering;

use serde::Serialize;

use crate::dsl::ast::{Atom, Exponent, Expr};
use crate::dsl::enclose::trig_range;
use crate::dsl::trig::{cos_enclosure, sin_enclosure};
use crate::dsl::{SamplePoint, Tag, SQRT2};
use crate::error::EvalError;
use crate::exact::{Enclosure, Scalar};
use crate::sets::IntervalSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rationality {
    Rational,
    Irrational,
    Unknown,
}

/// Result of point evaluation: the exact value when `lo == hi`, otherwise
/// a certified rational enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Value {
    pub lo: Scalar,
    pub hi: Scalar,
    pub rationality: Rationality,
}

impl Value {
    pub fn exact(&self) -> Option<&Scalar> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    /// Representative rational: the exact value or the enclosure midpoint.
    pub fn midpoint(&self) -> Scalar {
        if self.lo == self.hi {
            self.lo.clone()
        } else {
            Scalar::mid(&self.lo, &self.hi)
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Element of Q(sqrt 2), or an approximate value whose rationality is
/// tracked separately.
#[derive(Clone, Debug)]
enum V {
    Sym { a: Scalar, b: Scalar },
    Approx { lo: Scalar, hi: Scalar, rat: Rationality },
}

/// Sign of `u + b sqrt(2)`, decided exactly.
fn sign_q2(u: &Scalar, b: &Scalar) -> i32 {
    let (su, sb) = (u.signum(), b.signum());
    if sb == 0 {
        return su;
    }
    if su == 0 || su == sb {
        return if su == 0 { sb } else { su };
    }
    let u2 = u.square();
    let b2 = b.square() * Scalar::from_int(2);
    match u2.cmp(&b2) {
        Ordering::Greater => su,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// Compare `a + b sqrt(2)` with a rational.
fn cmp_q2(a: &Scalar, b: &Scalar, r: &Scalar) -> Ordering {
    sign_q2(&(a - r), b).cmp(&0)
}

fn sym_in_set(a: &Scalar, b: &Scalar, s: &IntervalSet) -> bool {
    use crate::exact::ExtendedReal::*;
    s.pieces().iter().any(|p| {
        let above = match &p.lo {
            NegInf => true,
            PosInf => false,
            Finite(l) => {
                let c = cmp_q2(a, b, l);
                c == Ordering::Greater || (c == Ordering::Equal && !p.lo_open)
            }
        };
        let below = match &p.hi {
            PosInf => true,
            NegInf => false,
            Finite(h) => {
                let c = cmp_q2(a, b, h);
                c == Ordering::Less || (c == Ordering::Equal && !p.hi_open)
            }
        };
        above && below
    })
}

impl V {
    fn rational(x: Scalar) -> V {
        V::Sym { a: x, b: Scalar::zero() }
    }

    fn is_exact_zero(&self) -> bool {
        matches!(self, V::Sym { a, b } if a.is_zero() && b.is_zero())
    }

    fn rat(&self) -> Rationality {
        match self {
            V::Sym { b, .. } if b.is_zero() => Rationality::Rational,
            V::Sym { .. } => Rationality::Irrational,
            V::Approx { rat, .. } => *rat,
        }
    }

    fn bounds(&self) -> (Scalar, Scalar) {
        match self {
            V::Sym { a, b } if b.is_zero() => (a.clone(), a.clone()),
            V::Sym { a, b } => {
                let x = a + &(b * &SQRT2.lo);
                let y = a + &(b * &SQRT2.hi);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            }
            V::Approx { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    fn approx(lo: Scalar, hi: Scalar, rat: Rationality) -> V {
        V::Approx { lo, hi, rat }
    }

    fn add(self, other: V) -> V {
        match (&self, &other) {
            (V::Sym { a, b }, V::Sym { a: c, b: d }) => V::Sym { a: a + c, b: b + d },
            _ => {
                let (l1, h1) = self.bounds();
                let (l2, h2) = other.bounds();
                V::approx(l1 + l2, h1 + h2, add_rat(self.rat(), other.rat()))
            }
        }
    }

    fn neg(self) -> V {
        match self {
            V::Sym { a, b } => V::Sym { a: -a, b: -b },
            V::Approx { lo, hi, rat } => V::Approx { lo: -hi, hi: -lo, rat },
        }
    }

    fn mul(self, other: V) -> V {
        if self.is_exact_zero() || other.is_exact_zero() {
            return V::rational(Scalar::zero());
        }
        match (&self, &other) {
            (V::Sym { a, b }, V::Sym { a: c, b: d }) if b.is_zero() && d.is_zero() => V::rational(a * c),
            (V::Sym { a, b }, V::Sym { a: c, b: d }) => {
                V::Sym { a: a * c + Scalar::from_int(2) * (b * d), b: a * d + b * c }
            }
            _ => {
                let e = interval(&self).mul(&interval(&other)).expect("finite product");
                let (lo, hi) = finite(&e);
                V::approx(lo, hi, mul_rat(&self, &other))
            }
        }
    }

    fn recip(self) -> Result<V, EvalError> {
        match self {
            V::Sym { a, b } if b.is_zero() => Ok(V::rational(a.recip().map_err(|_| EvalError::DivisionByZero)?)),
            V::Sym { a, b } => {
                // (a - b sqrt2) / (a^2 - 2 b^2); the norm vanishes only at 0
                let norm = a.square() - Scalar::from_int(2) * b.square();
                Ok(V::Sym { a: a.checked_div(&norm)?, b: (-b).checked_div(&norm)? })
            }
            V::Approx { lo, hi, rat } => {
                if lo.signum() * hi.signum() <= 0 {
                    return Err(EvalError::Straddle(format!("[{lo}, {hi}]")));
                }
                Ok(V::approx(hi.recip()?, lo.recip()?, rat))
            }
        }
    }

    fn abs(self) -> V {
        match self {
            V::Sym { ref a, ref b } => {
                if sign_q2(a, b) < 0 {
                    self.neg()
                } else {
                    self
                }
            }
            V::Approx { lo, hi, rat } => {
                let e = Enclosure::finite(lo, hi).abs();
                let (lo, hi) = finite(&e);
                V::approx(lo, hi, rat)
            }
        }
    }

    fn powi(self, k: i32) -> Result<V, EvalError> {
        if k < 0 {
            return self.recip()?.powi(-k);
        }
        if k == 0 {
            return Ok(V::rational(Scalar::one()));
        }
        match self {
            V::Sym { a, b } if b.is_zero() => Ok(V::rational(a.powi(k)?)),
            V::Sym { .. } => {
                let mut base = self;
                let mut acc = V::rational(Scalar::one());
                let mut e = k as u32;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc.mul(base.clone());
                    }
                    e >>= 1;
                    if e > 0 {
                        base = base.clone().mul(base);
                    }
                }
                Ok(acc)
            }
            V::Approx { lo, hi, rat } => {
                let e = Enclosure::finite(lo, hi).powi(k as u32);
                let (lo, hi) = finite(&e);
                let r = if k == 1 { rat } else { Rationality::Unknown };
                Ok(V::approx(lo, hi, r))
            }
        }
    }
}

fn interval(v: &V) -> Enclosure {
    let (lo, hi) = v.bounds();
    Enclosure::finite(lo, hi)
}

fn finite(e: &Enclosure) -> (Scalar, Scalar) {
    (e.lo.as_finite().expect("finite").clone(), e.hi.as_finite().expect("finite").clone())
}

fn add_rat(x: Rationality, y: Rationality) -> Rationality {
    use Rationality::*;
    match (x, y) {
        (Rational, Rational) => Rational,
        (Irrational, Rational) | (Rational, Irrational) => Irrational,
        _ => Unknown,
    }
}

fn mul_rat(x: &V, y: &V) -> Rationality {
    use Rationality::*;
    match (x.rat(), y.rat()) {
        (Rational, Rational) => Rational,
        // nonzero rational times irrational stays irrational; zero was
        // handled by the caller
        (Irrational, Rational) | (Rational, Irrational) => Irrational,
        _ => Unknown,
    }
}

pub(crate) fn eval(expr: &Expr, p: &SamplePoint) -> Result<Value, EvalError> {
    let x = match &p.tag {
        Tag::Rational => V::rational(p.value.clone()),
        Tag::Irrational { base, coeff } => V::Sym { a: base.clone(), b: coeff.clone() },
    };
    let v = ev(expr, &x)?;
    let rationality = v.rat();
    let (lo, hi) = v.bounds();
    Ok(Value { lo, hi, rationality })
}

fn ev(expr: &Expr, x: &V) -> Result<V, EvalError> {
    Ok(match expr {
        Expr::Const(c) => V::rational(c.clone()),
        Expr::Var => x.clone(),
        Expr::Neg(a) => ev(a, x)?.neg(),
        Expr::Add(a, b) => ev(a, x)?.add(ev(b, x)?),
        Expr::Sub(a, b) => ev(a, x)?.add(ev(b, x)?.neg()),
        Expr::Mul(a, b) => ev(a, x)?.mul(ev(b, x)?),
        Expr::Div(a, b) => {
            let num = ev(a, x)?;
            let den = ev(b, x)?;
            if den.is_exact_zero() {
                return Err(EvalError::DivisionByZero);
            }
            if num.is_exact_zero() {
                V::rational(Scalar::zero())
            } else {
                num.mul(den.recip()?)
            }
        }
        Expr::Pow(a, Exponent::Int(k)) => ev(a, x)?.powi(*k)?,
        Expr::Pow(a, Exponent::Var) => {
            let k = match x {
                V::Sym { a, b } if b.is_zero() && a.is_integer() => {
                    i32::try_from(a.numer().clone()).map_err(|_| EvalError::NonIntegerExponent)?
                }
                _ => return Err(EvalError::NonIntegerExponent),
            };
            ev(a, x)?.powi(k)?
        }
        Expr::Func(f, a) => {
            let arg = ev(a, x)?;
            apply(*f, arg)?
        }
        Expr::Piecewise { branches, default } => {
            for (guard, e) in branches {
                let hit = match x {
                    V::Sym { a, b } => sym_in_set(a, b, guard),
                    V::Approx { lo, hi, .. } => {
                        // only used for sequence indices, which are exact
                        guard.contains(lo) && guard.contains(hi)
                    }
                };
                if hit {
                    return ev(e, x);
                }
            }
            match default {
                Some(d) => ev(d, x)?,
                None => {
                    let (lo, _) = x.bounds();
                    return Err(EvalError::DomainViolation(lo.to_string()));
                }
            }
        }
    })
}

fn apply(f: Atom, arg: V) -> Result<V, EvalError> {
    Ok(match f {
        Atom::Abs => arg.abs(),
        Atom::Sin | Atom::Cos => match &arg {
            V::Sym { a, b } if b.is_zero() => {
                if a.is_zero() {
                    V::rational(if f == Atom::Sin { Scalar::zero() } else { Scalar::one() })
                } else {
                    let (lo, hi) = if f == Atom::Sin { sin_enclosure(a) } else { cos_enclosure(a) };
                    // sin and cos of a nonzero rational are transcendental
                    V::approx(lo, hi, Rationality::Irrational)
                }
            }
            _ => {
                let (lo, hi) = arg.bounds();
                let (l, h, _) = trig_range(f, &lo, &hi);
                V::approx(l, h, Rationality::Unknown)
            }
        },
        Atom::IndicatorQ => match arg.rat() {
            Rationality::Rational => V::rational(Scalar::one()),
            Rationality::Irrational => V::rational(Scalar::zero()),
            Rationality::Unknown => return Err(EvalError::RationalityUnknown),
        },
        Atom::Thomae => match (&arg, arg.rat()) {
            (V::Sym { a, .. }, Rationality::Rational) => {
                if a.is_zero() {
                    V::rational(Scalar::one())
                } else {
                    V::rational(Scalar::from_bigint(a.denom().clone()).recip()?)
                }
            }
            (_, Rationality::Irrational) => V::rational(Scalar::zero()),
            _ => return Err(EvalError::RationalityUnknown),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::FuncDef;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    fn at(f: &str, p: SamplePoint) -> Value {
        FuncDef::parse(f).unwrap().eval(&p).unwrap()
    }

    #[test]
    fn atoms_on_tags() {
        let r = |s: &str| SamplePoint::rational(q(s));
        assert_eq!(at("indicatorQ(x)", r("2/3")).exact(), Some(&q("1")));
        assert_eq!(at("indicatorQ(x)", SamplePoint::sqrt2()).exact(), Some(&q("0")));
        assert_eq!(at("thomae(x)", r("1/2")).exact(), Some(&q("1/2")));
        assert_eq!(at("thomae(x)", r("0")).exact(), Some(&q("1")));
        assert_eq!(at("thomae(x)", r("-6/4")).exact(), Some(&q("1/2")));
        assert_eq!(at("thomae(x)", SamplePoint::sqrt2()).exact(), Some(&q("0")));
        assert_eq!(at("x^2", r("3")).exact(), Some(&q("9")));
    }

    #[test]
    fn symbolic_tracking() {
        // sqrt2 * sqrt2 is the rational 2
        let v = at("x * x", SamplePoint::sqrt2());
        assert_eq!(v.exact(), Some(&q("2")));
        assert_eq!(v.rationality, Rationality::Rational);
        assert_eq!(at("indicatorQ(x^2)", SamplePoint::sqrt2()).exact(), Some(&q("1")));
        assert_eq!(at("indicatorQ(x - x)", SamplePoint::sqrt2()).exact(), Some(&q("1")));
        assert_eq!(at("indicatorQ(x + 1)", SamplePoint::sqrt2()).exact(), Some(&q("0")));
        let v = at("1/x", SamplePoint::sqrt2());
        assert_eq!(v.rationality, Rationality::Irrational);
        assert!(v.contains(&q("7071067811865475/10000000000000000")) || v.width() < q("1/1000000000000"));
    }

    #[test]
    fn trig_values() {
        let v = at("sin(x)", SamplePoint::rational(q("1")));
        assert!(!v.is_exact() && v.width() <= Scalar::pow2_inv(64));
        assert_eq!(v.rationality, Rationality::Irrational);
        assert_eq!(at("indicatorQ(sin(x))", SamplePoint::rational(q("1"))).exact(), Some(&q("0")));
        assert_eq!(at("cos(x)", SamplePoint::rational(q("0"))).exact(), Some(&q("1")));
        let f = FuncDef::parse("indicatorQ(sin(x))").unwrap();
        assert_eq!(f.eval(&SamplePoint::sqrt2()), Err(EvalError::RationalityUnknown));
    }

    #[test]
    fn errors_and_piecewise() {
        let f = FuncDef::parse("1/x").unwrap();
        assert_eq!(f.eval_rational(&q("0")), Err(EvalError::DivisionByZero));
        let f = FuncDef::parse("piecewise{ {0} -> 0; else -> 1/x }").unwrap();
        assert_eq!(f.eval_rational(&q("0")).unwrap().exact(), Some(&q("0")));
        assert_eq!(f.eval_rational(&q("1/2")).unwrap().exact(), Some(&q("2")));
        let f = FuncDef::parse("piecewise{ (0,1) -> 1 }").unwrap();
        assert!(f.eval_rational(&q("2")).is_err());
        let g = FuncDef::parse("piecewise{ (-inf,sqrt) -> 1 }");
        assert!(g.is_err());
        let f = FuncDef::parse("x").unwrap().with_domain(IntervalSet::closed(q("0"), q("1"))).unwrap();
        assert!(matches!(f.eval_rational(&q("2")), Err(EvalError::DomainViolation(_))));
        // sqrt2 is above 1.414 and below 1.415 in the exact comparison
        let f = FuncDef::parse("piecewise{ (1414/1000, 1415/1000) -> 1; else -> 0 }").unwrap();
        assert_eq!(f.eval(&SamplePoint::sqrt2()).unwrap().exact(), Some(&q("1")));
    }

    #[test]
    fn sequence_exponent() {
        let f = FuncDef::parse_sequence("(-1)^n * (1 + 1/n)").unwrap();
        assert_eq!(f.eval_rational(&q("3")).unwrap().exact(), Some(&q("-4/3")));
        assert_eq!(f.eval_rational(&q("2")).unwrap().exact(), Some(&q("3/2")));
    }

    #[test]
    fn q2_signs() {
        assert_eq!(sign_q2(&q("-1"), &q("1")), 1);
        assert_eq!(sign_q2(&q("2"), &q("-1")), 1);
        assert_eq!(sign_q2(&q("1"), &q("-1")), -1);
        assert_eq!(sign_q2(&q("0"), &q("0")), 0);
    }
}
