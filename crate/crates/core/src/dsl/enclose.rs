//! Guaranteed enclosures of expressions over intervals.

use serde::Serialize;

use crate::dsl::ast::{Atom, Exponent, Expr};
use crate::dsl::rational::smallest_denominator;
use crate::dsl::trig::{cos_enclosure, crit_hits, sin_enclosure, Hit};
use crate::dsl::{eval, SamplePoint};
use crate::exact::{Enclosure, ExtendedReal, Scalar};
use crate::sets::{Interval, IntervalSet};

/// Enclosure plus what is known about it: `tight` means the bounds are the
/// inf and sup of the function on the interval; `continuous` means the
/// function is continuous there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub enclosure: Enclosure,
    pub tight: bool,
    pub continuous: bool,
}

impl Bound {
    pub fn is_unbounded(&self) -> bool {
        !self.enclosure.is_bounded()
    }

    fn loose(enclosure: Enclosure) -> Bound {
        Bound { enclosure, tight: false, continuous: false }
    }

    fn whole() -> Bound {
        Bound::loose(Enclosure::whole())
    }
}

/// Natural-extension node: the bound and whether the subexpression is free
/// of the variable.
#[derive(Clone, Debug)]
struct Nb {
    b: Bound,
    constant: bool,
}

impl Nb {
    fn exact_scalar(&self) -> Option<&Scalar> {
        if !self.constant {
            return None;
        }
        let (lo, hi) = (self.b.enclosure.lo.as_finite()?, self.b.enclosure.hi.as_finite()?);
        (lo == hi).then_some(lo)
    }
}

pub(crate) fn enclose(expr: &Expr, iv: &Interval) -> Bound {
    if iv.is_degenerate() {
        return point_bound(expr, iv.lo.as_finite().expect("finite point"));
    }
    let mut cuts = Vec::new();
    expr.guard_breakpoints(&mut cuts);
    cuts.sort();
    cuts.dedup();
    let inside: Vec<Scalar> = cuts
        .into_iter()
        .filter(|c| {
            let e = ExtendedReal::Finite(c.clone());
            iv.lo < e && e < iv.hi
        })
        .collect();
    if inside.is_empty() {
        return enclose_piece(expr, iv);
    }
    let parts = split(iv, &inside);
    let bounds: Vec<Bound> = parts.iter().map(|p| enclose_piece(expr, p)).collect();
    let enclosure = bounds.iter().skip(1).fold(bounds[0].enclosure.clone(), |acc, b| acc.hull(&b.enclosure));
    let tight = bounds.iter().all(|b| b.tight);
    // splitting happened at guard points where f is generally discontinuous
    Bound { enclosure, tight, continuous: false }
}

/// Open pieces and breakpoints of `iv` cut at the interior points `cuts`.
fn split(iv: &Interval, cuts: &[Scalar]) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut lo = iv.lo.clone();
    let mut lo_open = iv.lo_open;
    for c in cuts {
        let ce = ExtendedReal::Finite(c.clone());
        out.extend(Interval::new(lo.clone(), lo_open, ce.clone(), true));
        out.push(Interval::point(c.clone()));
        lo = ce;
        lo_open = true;
    }
    out.extend(Interval::new(lo, lo_open, iv.hi.clone(), iv.hi_open));
    out
}

fn point_bound(expr: &Expr, p: &Scalar) -> Bound {
    match eval::eval(expr, &SamplePoint::rational(p.clone())) {
        Ok(v) => Bound { enclosure: Enclosure::finite(v.lo, v.hi), tight: true, continuous: true },
        Err(_) => Bound::whole(),
    }
}

fn enclose_piece(expr: &Expr, iv: &Interval) -> Bound {
    if iv.is_degenerate() {
        return point_bound(expr, iv.lo.as_finite().expect("finite point"));
    }
    let Some(resolved) = resolve(expr, iv) else {
        return natural(expr, iv).b;
    };
    if let Some(coeffs) = poly(&resolved) {
        if coeffs.len() <= 3 {
            return Bound { enclosure: quadratic_range(&coeffs, iv), tight: true, continuous: true };
        }
    }
    if let Some(b) = monotone_bound(&resolved, iv) {
        return b;
    }
    natural(&resolved, iv).b
}

/// Replace piecewise nodes by the branch covering all of `iv`.
fn resolve(expr: &Expr, iv: &Interval) -> Option<Expr> {
    let r = |e: &Expr| resolve(e, iv).map(Box::new);
    Some(match expr {
        Expr::Const(_) | Expr::Var => expr.clone(),
        Expr::Neg(a) => Expr::Neg(r(a)?),
        Expr::Add(a, b) => Expr::Add(r(a)?, r(b)?),
        Expr::Sub(a, b) => Expr::Sub(r(a)?, r(b)?),
        Expr::Mul(a, b) => Expr::Mul(r(a)?, r(b)?),
        Expr::Div(a, b) => Expr::Div(r(a)?, r(b)?),
        Expr::Pow(a, e) => Expr::Pow(r(a)?, e.clone()),
        Expr::Func(f, a) => Expr::Func(*f, r(a)?),
        Expr::Piecewise { branches, default } => {
            let set = IntervalSet::from_interval(iv.clone());
            for (g, e) in branches {
                let meet = g.intersection(&set);
                if meet == set {
                    return resolve(e, iv);
                }
                if !meet.is_empty() {
                    return None;
                }
            }
            return resolve(default.as_ref()?, iv);
        }
    })
}

/// Coefficients (lowest degree first) when the expression is a polynomial.
fn poly(expr: &Expr) -> Option<Vec<Scalar>> {
    const CAP: usize = 8;
    fn trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
        while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
    fn mul(a: &[Scalar], b: &[Scalar]) -> Option<Vec<Scalar>> {
        if a.len() + b.len() - 1 > CAP {
            return None;
        }
        let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        Some(trim(out))
    }
    fn add(a: &[Scalar], b: &[Scalar], sign: i64) -> Vec<Scalar> {
        let n = a.len().max(b.len());
        let s = Scalar::from_int(sign);
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default();
                let y = b.get(i).cloned().unwrap_or_default();
                x + &s * y
            })
            .collect();
        trim(out)
    }
    Some(match expr {
        Expr::Const(c) => vec![c.clone()],
        Expr::Var => vec![Scalar::zero(), Scalar::one()],
        Expr::Neg(a) => poly(a)?.into_iter().map(|c| -c).collect(),
        Expr::Add(a, b) => add(&poly(a)?, &poly(b)?, 1),
        Expr::Sub(a, b) => add(&poly(a)?, &poly(b)?, -1),
        Expr::Mul(a, b) => mul(&poly(a)?, &poly(b)?)?,
        Expr::Div(a, b) => {
            let d = poly(b)?;
            if d.len() != 1 || d[0].is_zero() {
                return None;
            }
            let inv = d[0].recip().ok()?;
            poly(a)?.into_iter().map(|c| c * &inv).collect()
        }
        Expr::Pow(a, Exponent::Int(k)) if *k >= 0 => {
            let base = poly(a)?;
            let mut acc = vec![Scalar::one()];
            for _ in 0..*k {
                acc = mul(&acc, &base)?;
            }
            acc
        }
        _ => return None,
    })
}

fn horner(c: &[Scalar], x: &Scalar) -> Scalar {
    c.iter().rev().fold(Scalar::zero(), |acc, k| acc * x + k)
}

/// Exact range of a polynomial of degree at most 2 over the closure of `iv`.
fn quadratic_range(c: &[Scalar], iv: &Interval) -> Enclosure {
    let lead = c.last().cloned().unwrap_or_default();
    let degree = if c.len() == 1 || lead.is_zero() { 0 } else { c.len() - 1 };
    let mut vals: Vec<ExtendedReal> = Vec::new();
    for (end, dir) in [(&iv.lo, -1), (&iv.hi, 1)] {
        match end {
            ExtendedReal::Finite(x) => vals.push(ExtendedReal::Finite(horner(c, x))),
            _ => {
                if degree == 0 {
                    vals.push(ExtendedReal::Finite(c[0].clone()));
                } else {
                    // sign of lead * dir^degree
                    let s = lead.signum() * if degree % 2 == 1 { dir } else { 1 };
                    vals.push(if s > 0 { ExtendedReal::PosInf } else { ExtendedReal::NegInf });
                }
            }
        }
    }
    if degree == 2 {
        let v = (-&c[1]).checked_div(&(Scalar::from_int(2) * &c[2])).expect("lead nonzero");
        if iv.closure_contains(&v) {
            vals.push(ExtendedReal::Finite(horner(c, &v)));
        }
    }
    let lo = vals.iter().min().cloned().expect("two values");
    let hi = vals.iter().max().cloned().expect("two values");
    Enclosure { lo, hi }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    Const,
    Inc,
    Dec,
}

impl Dir {
    fn flip(self) -> Dir {
        match self {
            Dir::Inc => Dir::Dec,
            Dir::Dec => Dir::Inc,
            Dir::Const => Dir::Const,
        }
    }

    fn combine(self, other: Dir) -> Option<Dir> {
        match (self, other) {
            (Dir::Const, d) | (d, Dir::Const) => Some(d),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

/// +1 when the enclosure is >= 0, -1 when <= 0.
fn sign_region(e: &Enclosure) -> Option<i32> {
    let z = ExtendedReal::zero();
    if e.lo >= z {
        Some(1)
    } else if e.hi <= z {
        Some(-1)
    } else {
        None
    }
}

/// Direction of a product of two factors with known directions and
/// enclosures; both factors must keep a sign.
fn product_dir(da: Dir, ea: &Enclosure, db: Dir, eb: &Enclosure) -> Option<Dir> {
    if da == Dir::Const && db == Dir::Const {
        return Some(Dir::Const);
    }
    let sa = sign_region(ea)?;
    let sb = sign_region(eb)?;
    let na = if sa > 0 { da } else { da.flip() };
    let nb = if sb > 0 { db } else { db.flip() };
    let d = match (na, nb) {
        (Dir::Const, d) | (d, Dir::Const) => d,
        (x, y) if x == y => x,
        _ => return None,
    };
    Some(if sa * sb < 0 { d.flip() } else { d })
}

/// Monotone and continuous on `iv`, with the natural enclosure used for
/// sign conditions.
fn mono(expr: &Expr, iv: &Interval) -> Option<Dir> {
    match expr {
        Expr::Const(_) => Some(Dir::Const),
        Expr::Var => Some(Dir::Inc),
        Expr::Neg(a) => Some(mono(a, iv)?.flip()),
        Expr::Add(a, b) => mono(a, iv)?.combine(mono(b, iv)?),
        Expr::Sub(a, b) => mono(a, iv)?.combine(mono(b, iv)?.flip()),
        Expr::Mul(a, b) => {
            let (da, db) = (mono(a, iv)?, mono(b, iv)?);
            product_dir(da, &natural(a, iv).b.enclosure, db, &natural(b, iv).b.enclosure)
        }
        Expr::Div(a, b) => {
            let (da, db) = (mono(a, iv)?, mono(b, iv)?);
            let eb = natural(b, iv).b.enclosure;
            if eb.contains_zero() {
                return None;
            }
            let inv = eb.recip().ok()?;
            product_dir(da, &natural(a, iv).b.enclosure, db.flip(), &inv)
        }
        Expr::Pow(a, Exponent::Int(k)) => {
            let d = mono(a, iv)?;
            if *k == 0 {
                return Some(Dir::Const);
            }
            let ea = natural(a, iv).b.enclosure;
            let m = k.unsigned_abs();
            let dk = match sign_region(&ea) {
                Some(1) => d,
                Some(_) => {
                    if m % 2 == 0 {
                        d.flip()
                    } else {
                        d
                    }
                }
                None => {
                    if m % 2 == 1 {
                        d
                    } else {
                        return None;
                    }
                }
            };
            if *k < 0 {
                if ea.contains_zero() {
                    return None;
                }
                Some(dk.flip())
            } else {
                Some(dk)
            }
        }
        Expr::Pow(_, Exponent::Var) => None,
        Expr::Func(Atom::Abs, a) => {
            let d = mono(a, iv)?;
            match sign_region(&natural(a, iv).b.enclosure)? {
                1 => Some(d),
                _ => Some(d.flip()),
            }
        }
        Expr::Func(f @ (Atom::Sin | Atom::Cos), a) => {
            let d = mono(a, iv)?;
            if d == Dir::Const {
                return Some(Dir::Const);
            }
            let ea = natural(a, iv).b.enclosure;
            let (p, q) = (ea.lo.as_finite()?, ea.hi.as_finite()?);
            if q - p >= Scalar::from_int(3) {
                return None;
            }
            let (max_off, min_off) = trig_offsets(*f);
            if crit_hits(p, q, &max_off) != Hit::No || crit_hits(p, q, &min_off) != Hit::No {
                return None;
            }
            // derivative sign at the midpoint: cos for sin, -sin for cos
            let m = Scalar::mid(p, q);
            let (lo, hi) = if *f == Atom::Sin { cos_enclosure(&m) } else { sin_enclosure(&m) };
            let s = if lo.is_positive() {
                1
            } else if hi.is_negative() {
                -1
            } else {
                return None;
            };
            let s = if *f == Atom::Cos { -s } else { s };
            Some(if s > 0 { d } else { d.flip() })
        }
        Expr::Func(_, a) => {
            if mono(a, iv)? == Dir::Const {
                Some(Dir::Const)
            } else {
                None
            }
        }
        Expr::Piecewise { .. } => None,
    }
}

fn monotone_bound(expr: &Expr, iv: &Interval) -> Option<Bound> {
    let (a, b) = iv.bounds()?;
    mono(expr, iv)?;
    let va = eval::eval(expr, &SamplePoint::rational(a.clone())).ok()?;
    let vb = eval::eval(expr, &SamplePoint::rational(b.clone())).ok()?;
    let lo = Scalar::min(&va.lo, &vb.lo);
    let hi = Scalar::max(&va.hi, &vb.hi);
    Some(Bound { enclosure: Enclosure::finite(lo, hi), tight: true, continuous: true })
}

/// Lower bound on `sup f - inf f` over every nondegenerate subinterval
/// of `iv`, when one is certified. `indicatorQ` of a nonconstant
/// polynomial takes both values on every such subinterval.
pub(crate) fn oscillation_floor(expr: &Expr, iv: &Interval) -> Option<Scalar> {
    if iv.is_degenerate() {
        return None;
    }
    let expr = resolve(expr, iv)?;
    let floor = match &expr {
        Expr::Func(Atom::IndicatorQ, a) => (poly(a)?.len() > 1).then(Scalar::one)?,
        Expr::Neg(a) => oscillation_floor(a, iv)?,
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            let (k, e) = match (a.as_ref(), b.as_ref()) {
                (Expr::Const(k), e) if matches!(expr, Expr::Mul(..)) => (k.clone(), e),
                (e, Expr::Const(k)) => {
                    let k = if matches!(expr, Expr::Div(..)) { k.recip().ok()? } else { k.clone() };
                    (k, e)
                }
                _ => return None,
            };
            oscillation_floor(e, iv)? * k.abs()
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (m, other) = match oscillation_floor(a, iv) {
                Some(m) => (m, b),
                None => (oscillation_floor(b, iv)?, a),
            };
            m - enclose(other, iv).enclosure.width()?
        }
        _ => return None,
    };
    floor.is_positive().then_some(floor)
}

/// Offsets (in units of pi) of the maxima and minima of sin or cos.
fn trig_offsets(f: Atom) -> (Scalar, Scalar) {
    if f == Atom::Sin {
        (Scalar::new(1, 2).expect("const"), Scalar::new(3, 2).expect("const"))
    } else {
        (Scalar::zero(), Scalar::one())
    }
}

/// Range of sin or cos over `[lo, hi]` with a flag for whether every
/// critical point was located decisively.
pub(crate) fn trig_range(f: Atom, lo: &Scalar, hi: &Scalar) -> (Scalar, Scalar, bool) {
    let one = Scalar::one();
    let m1 = -Scalar::one();
    if hi - lo >= Scalar::from_int(7) {
        return (m1, one, true);
    }
    let ev = |x: &Scalar| if f == Atom::Sin { sin_enclosure(x) } else { cos_enclosure(x) };
    let (l1, h1) = ev(lo);
    let (l2, h2) = ev(hi);
    let mut l = Scalar::min(&l1, &l2);
    let mut h = Scalar::max(&h1, &h2);
    let mut tight = true;
    let (max_off, min_off) = trig_offsets(f);
    match crit_hits(lo, hi, &max_off) {
        Hit::Yes => h = one.clone(),
        Hit::Maybe => {
            h = one.clone();
            tight = false;
        }
        Hit::No => {}
    }
    match crit_hits(lo, hi, &min_off) {
        Hit::Yes => l = m1.clone(),
        Hit::Maybe => {
            l = m1.clone();
            tight = false;
        }
        Hit::No => {}
    }
    (l, h, tight)
}

fn natural(expr: &Expr, iv: &Interval) -> Nb {
    let tc = |b: &Nb| b.b.tight && b.b.continuous;
    match expr {
        Expr::Const(c) => Nb {
            b: Bound { enclosure: Enclosure::point(c.clone()), tight: true, continuous: true },
            constant: true,
        },
        Expr::Var => Nb {
            b: Bound { enclosure: Enclosure { lo: iv.lo.clone(), hi: iv.hi.clone() }, tight: true, continuous: true },
            constant: false,
        },
        Expr::Neg(a) => {
            let na = natural(a, iv);
            Nb { b: Bound { enclosure: na.b.enclosure.neg(), ..na.b }, constant: na.constant }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (na, nb) = (natural(a, iv), natural(b, iv));
            let r = if matches!(expr, Expr::Add(..)) {
                na.b.enclosure.add(&nb.b.enclosure)
            } else {
                na.b.enclosure.sub(&nb.b.enclosure)
            };
            let enclosure = r.unwrap_or_else(|_| Enclosure::whole());
            let tight = (na.exact_scalar().is_some() && tc(&nb)) || (nb.exact_scalar().is_some() && tc(&na));
            Nb {
                b: Bound { enclosure, tight, continuous: na.b.continuous && nb.b.continuous },
                constant: na.constant && nb.constant,
            }
        }
        Expr::Mul(a, b) => {
            let (na, nb) = (natural(a, iv), natural(b, iv));
            let enclosure = na.b.enclosure.mul(&nb.b.enclosure).unwrap_or_else(|_| Enclosure::whole());
            let tight = (na.exact_scalar().is_some() && tc(&nb)) || (nb.exact_scalar().is_some() && tc(&na));
            Nb {
                b: Bound { enclosure, tight, continuous: na.b.continuous && nb.b.continuous },
                constant: na.constant && nb.constant,
            }
        }
        Expr::Div(a, b) => {
            let (na, nb) = (natural(a, iv), natural(b, iv));
            let den_zero_free = !nb.b.enclosure.contains_zero() || edge_zero(b, &nb, iv);
            let enclosure = na.b.enclosure.div(&nb.b.enclosure).unwrap_or_else(|_| Enclosure::whole());
            let tight = den_zero_free
                && ((nb.exact_scalar().is_some() && tc(&na))
                    || (na.exact_scalar().is_some_and(|c| !c.is_zero()) && tc(&nb)));
            Nb {
                b: Bound { enclosure, tight, continuous: na.b.continuous && nb.b.continuous && den_zero_free },
                constant: na.constant && nb.constant,
            }
        }
        Expr::Pow(a, Exponent::Int(k)) => {
            let na = natural(a, iv);
            let m = k.unsigned_abs();
            let p = na.b.enclosure.powi(m);
            if *k >= 0 {
                return Nb { b: Bound { enclosure: p, tight: tc(&na), continuous: na.b.continuous }, constant: na.constant };
            }
            let zero_free = !na.b.enclosure.contains_zero() || edge_zero(a, &na, iv);
            let enclosure = p.recip().unwrap_or_else(|_| Enclosure::whole());
            Nb {
                b: Bound { enclosure, tight: tc(&na) && zero_free, continuous: na.b.continuous && zero_free },
                constant: na.constant,
            }
        }
        Expr::Pow(_, Exponent::Var) => Nb { b: Bound::whole(), constant: false },
        Expr::Func(f, a) => {
            let na = natural(a, iv);
            if na.constant {
                return Nb { b: constant_atom(*f, a, &na), constant: true };
            }
            let b = match f {
                Atom::Abs => Bound { enclosure: na.b.enclosure.abs(), tight: tc(&na), continuous: na.b.continuous },
                Atom::Sin | Atom::Cos => match (na.b.enclosure.lo.as_finite(), na.b.enclosure.hi.as_finite()) {
                    (Some(l), Some(h)) => {
                        let (lo, hi, decisive) = trig_range(*f, l, h);
                        Bound {
                            enclosure: Enclosure::finite(lo, hi),
                            tight: tc(&na) && decisive,
                            continuous: na.b.continuous,
                        }
                    }
                    _ => Bound {
                        enclosure: Enclosure::finite(-Scalar::one(), Scalar::one()),
                        tight: tc(&na),
                        continuous: na.b.continuous,
                    },
                },
                Atom::IndicatorQ => {
                    let nondegenerate = na.b.enclosure.lo < na.b.enclosure.hi;
                    Bound {
                        enclosure: Enclosure::finite(Scalar::zero(), Scalar::one()),
                        tight: tc(&na) && nondegenerate,
                        continuous: false,
                    }
                }
                Atom::Thomae => thomae_bound(a, &na, iv),
            };
            Nb { b, constant: false }
        }
        Expr::Piecewise { branches, default } => {
            let set = IntervalSet::from_interval(iv.clone());
            let mut regions: Vec<(IntervalSet, &Expr)> =
                branches.iter().map(|(g, e)| (g.intersection(&set), e)).filter(|(s, _)| !s.is_empty()).collect();
            if let Some(d) = default {
                let covered = branches.iter().fold(IntervalSet::empty(), |acc, (g, _)| acc.union(g));
                let rest = set.difference(&covered);
                if !rest.is_empty() {
                    regions.push((rest, d));
                }
            }
            if regions.is_empty() {
                return Nb { b: Bound::whole(), constant: false };
            }
            let single = regions.len() == 1 && regions[0].0 == set;
            let mut acc: Option<Enclosure> = None;
            let mut tight = true;
            let mut continuous = single;
            for (region, e) in &regions {
                for piece in region.pieces() {
                    let b = enclose(e, piece);
                    tight &= b.tight;
                    continuous &= b.continuous;
                    acc = Some(match acc {
                        None => b.enclosure,
                        Some(x) => x.hull(&b.enclosure),
                    });
                }
            }
            Nb { b: Bound { enclosure: acc.expect("nonempty"), tight, continuous }, constant: false }
        }
    }
}

/// A strictly monotone continuous denominator whose tight enclosure ends
/// at 0 can only vanish at an end of `iv`; an open end means never.
fn edge_zero(den: &Expr, nd: &Nb, iv: &Interval) -> bool {
    let e = &nd.b.enclosure;
    let z = ExtendedReal::zero();
    if !(nd.b.tight && nd.b.continuous) || !(e.lo == z || e.hi == z) || e.lo == e.hi {
        return false;
    }
    let Some(dir) = mono(den, iv) else {
        return false;
    };
    if dir == Dir::Const {
        return false;
    }
    // the zero sits at the end where the denominator reaches its extreme
    let at_lo = (e.lo == z) == (dir == Dir::Inc);
    if at_lo {
        iv.lo_open
    } else {
        iv.hi_open
    }
}

/// Atom applied to a variable-free argument: evaluate it once.
fn constant_atom(f: Atom, a: &Expr, na: &Nb) -> Bound {
    let e = Expr::Func(f, Box::new(a.clone()));
    match eval::eval(&e, &SamplePoint::rational(Scalar::zero())) {
        Ok(v) => Bound { enclosure: Enclosure::finite(v.lo, v.hi), tight: true, continuous: true },
        Err(_) => {
            let enclosure = match f {
                Atom::Abs => na.b.enclosure.abs(),
                Atom::Sin | Atom::Cos | Atom::IndicatorQ => Enclosure::finite(-Scalar::one(), Scalar::one()),
                Atom::Thomae => Enclosure::finite(Scalar::zero(), Scalar::one()),
            };
            Bound { enclosure, tight: false, continuous: true }
        }
    }
}

fn thomae_bound(arg: &Expr, na: &Nb, iv: &Interval) -> Bound {
    let unit = Enclosure::finite(Scalar::zero(), Scalar::one());
    let e = &na.b.enclosure;
    if e.lo >= e.hi {
        return Bound { enclosure: unit, tight: false, continuous: false };
    }
    if *arg == Expr::Var {
        let q = smallest_denominator(iv);
        return Bound {
            enclosure: Enclosure::finite(Scalar::zero(), Scalar::from_bigint(q).recip().expect("q >= 1")),
            tight: true,
            continuous: false,
        };
    }
    let closed = Interval::new(e.lo.clone(), false, e.hi.clone(), false).expect("nondegenerate");
    let q_closed = smallest_denominator(&closed);
    let tight = if na.b.tight && na.b.continuous {
        let open = Interval::new(e.lo.clone(), true, e.hi.clone(), true).expect("nondegenerate");
        smallest_denominator(&open) == q_closed
    } else {
        false
    };
    Bound {
        enclosure: Enclosure::finite(Scalar::zero(), Scalar::from_bigint(q_closed).recip().expect("q >= 1")),
        tight,
        continuous: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::FuncDef;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    fn enc(f: &str, iv: &str) -> Bound {
        let set = IntervalSet::parse(iv).unwrap();
        FuncDef::parse(f).unwrap().enclose(&set.pieces()[0]).unwrap()
    }

    fn fin(b: &Bound) -> (Scalar, Scalar) {
        (b.enclosure.lo.as_finite().unwrap().clone(), b.enclosure.hi.as_finite().unwrap().clone())
    }

    #[test]
    fn oscillation() {
        let iv = Interval::closed(q("0"), q("1")).unwrap();
        let floor = |f: &str| oscillation_floor(&crate::dsl::parse_expr(f, "x", false).unwrap(), &iv);
        assert_eq!(floor("indicatorQ(x)"), Some(q("1")));
        assert_eq!(floor("3*indicatorQ(2*x+1) - x/2"), Some(q("5/2")));
        assert_eq!(floor("indicatorQ(1/2)"), None);
        assert_eq!(floor("thomae(x)"), None);
        assert_eq!(floor("indicatorQ(x) + 2*x"), None);
    }

    #[test]
    fn examples() {
        let b = enc("indicatorQ(x)", "(1/3,1/2)");
        assert_eq!(fin(&b), (q("0"), q("1")));
        assert!(b.tight);
        let b = enc("thomae(x)", "[97/300,103/300]");
        assert_eq!(fin(&b), (q("0"), q("1/3")));
        assert!(b.tight);
        let b = enc("x^2", "[-1,2]");
        assert_eq!(fin(&b), (q("0"), q("4")));
        assert!(b.tight);
        let b = enc("thomae(x)", "[0,1/2]");
        assert_eq!(fin(&b), (q("0"), q("1")));
    }

    #[test]
    fn reciprocal_at_open_end() {
        let b = enc("1/x", "(0, 1)");
        assert!(b.tight && b.continuous);
        assert_eq!(b.enclosure.lo, ExtendedReal::Finite(q("1")));
        assert_eq!(b.enclosure.hi, ExtendedReal::PosInf);
        let b = enc("5*cos(1/x)", "(0, 1/10)");
        assert!(b.tight && b.continuous);
        assert_eq!(fin(&b), (q("-5"), q("5")));
        assert!(!enc("1/x", "[0, 1)").continuous);
    }

    #[test]
    fn monotone_and_trig() {
        let b = enc("x^3 + x", "[0,1]");
        assert_eq!(fin(&b), (q("0"), q("2")));
        assert!(b.tight);
        let b = enc("1/x", "[1,2]");
        assert_eq!(fin(&b), (q("1/2"), q("1")));
        let b = enc("sin(x)", "[0,2]");
        let (lo, hi) = fin(&b);
        assert_eq!(hi, q("1"));
        assert!(lo.is_zero());
        assert!(b.tight);
        let b = enc("cos(x)", "[-1,1]");
        assert_eq!(fin(&b).1, q("1"));
    }

    #[test]
    fn unbounded_division() {
        let b = enc("1/x", "(0,1)");
        assert!(b.is_unbounded());
        assert_eq!(b.enclosure.hi, ExtendedReal::PosInf);
        let b = enc("1/x", "(-1,1)");
        assert_eq!(b.enclosure, Enclosure::whole());
        assert!(!b.continuous);
    }

    #[test]
    fn piecewise_splits() {
        let b = enc("piecewise{ {0} -> 0; else -> 1/x }", "(-1,1)");
        assert!(b.is_unbounded());
        let b = enc("piecewise{ [0,inf) -> 1; else -> -1 }", "(-1,1)");
        assert_eq!(fin(&b), (q("-1"), q("1")));
        assert!(b.tight);
        let b = enc("piecewise{ [0,inf) -> x; else -> -x }", "(1,2)");
        assert!(b.continuous && b.tight);
        assert_eq!(fin(&b), (q("1"), q("2")));
    }

    #[test]
    fn quadratic_unbounded() {
        let b = enc("x^2 - 2*x", "(-inf,inf)");
        assert_eq!(b.enclosure.lo, ExtendedReal::Finite(q("-1")));
        assert_eq!(b.enclosure.hi, ExtendedReal::PosInf);
    }
}
