//! Finite unions of intervals over the extended reals, kept in a normal
//! form where structural equality is set equality.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError};
use crate::exact::{ExtendedReal, Scalar};
use crate::text::Cursor;

/// One interval. Infinite endpoints are always open; a degenerate interval
/// is a closed singleton.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    pub lo: ExtendedReal,
    pub lo_open: bool,
    pub hi: ExtendedReal,
    pub hi_open: bool,
}

impl Interval {
    /// Returns `None` when the described interval is empty.
    pub fn new(lo: ExtendedReal, lo_open: bool, hi: ExtendedReal, hi_open: bool) -> Option<Self> {
        let lo_open = lo_open || !lo.is_finite();
        let hi_open = hi_open || !hi.is_finite();
        if lo > hi || (lo == hi && (lo_open || hi_open)) {
            return None;
        }
        Some(Interval { lo, lo_open, hi, hi_open })
    }

    pub fn open(a: Scalar, b: Scalar) -> Option<Self> {
        Self::new(a.into(), true, b.into(), true)
    }

    pub fn closed(a: Scalar, b: Scalar) -> Option<Self> {
        Self::new(a.into(), false, b.into(), false)
    }

    pub fn point(p: Scalar) -> Self {
        Interval { lo: p.clone().into(), lo_open: false, hi: p.into(), hi_open: false }
    }

    pub fn whole() -> Self {
        Interval { lo: ExtendedReal::NegInf, lo_open: true, hi: ExtendedReal::PosInf, hi_open: true }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Finite endpoints, when both exist.
    pub fn bounds(&self) -> Option<(&Scalar, &Scalar)> {
        Some((self.lo.as_finite()?, self.hi.as_finite()?))
    }

    pub fn width(&self) -> Option<Scalar> {
        self.bounds().map(|(a, b)| b - a)
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let x = ExtendedReal::Finite(x.clone());
        let above = if self.lo_open { self.lo < x } else { self.lo <= x };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        let lo_ok = self.lo < o.lo || (self.lo == o.lo && (o.lo_open || !self.lo_open));
        let hi_ok = o.hi < self.hi || (self.hi == o.hi && (o.hi_open || !self.hi_open));
        lo_ok && hi_ok
    }

    /// Membership in the closure.
    pub fn closure_contains(&self, x: &Scalar) -> bool {
        let x = ExtendedReal::Finite(x.clone());
        self.lo <= x && x <= self.hi
    }

    pub fn closure(&self) -> Interval {
        Interval::new(self.lo.clone(), false, self.hi.clone(), false).expect("nonempty")
    }

    pub fn midpoint(&self) -> Option<Scalar> {
        self.bounds().map(|(a, b)| Scalar::mid(a, b))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            return write!(f, "{{{}}}", self.lo);
        }
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntervalSet {
    pieces: Vec<Interval>,
}

/// Elementary cells of the line cut at a sorted list of breakpoints:
/// `gap 0, point 0, gap 1, ..., point m-1, gap m`.
struct Atoms {
    bps: Vec<Scalar>,
}

impl Atoms {
    fn of(sets: &[&IntervalSet]) -> Atoms {
        let mut bps: Vec<Scalar> = sets
            .iter()
            .flat_map(|s| s.pieces.iter())
            .flat_map(|p| [p.lo.as_finite().cloned(), p.hi.as_finite().cloned()])
            .flatten()
            .collect();
        bps.sort();
        bps.dedup();
        Atoms { bps }
    }

    fn gap_sample(&self, i: usize) -> Scalar {
        let m = self.bps.len();
        if m == 0 {
            Scalar::zero()
        } else if i == 0 {
            &self.bps[0] - Scalar::one()
        } else if i == m {
            &self.bps[m - 1] + Scalar::one()
        } else {
            Scalar::mid(&self.bps[i - 1], &self.bps[i])
        }
    }

    fn membership(&self, s: &IntervalSet) -> (Vec<bool>, Vec<bool>) {
        let m = self.bps.len();
        let gaps = (0..=m).map(|i| s.contains(&self.gap_sample(i))).collect();
        let pts = self.bps.iter().map(|p| s.contains(p)).collect();
        (gaps, pts)
    }

    fn build(&self, gaps: &[bool], pts: &[bool]) -> IntervalSet {
        let m = self.bps.len();
        let mut pieces = Vec::new();
        // walk atoms 0..2m+1; even = gap i/2, odd = point i/2
        let included = |a: usize| if a % 2 == 0 { gaps[a / 2] } else { pts[a / 2] };
        let total = 2 * m + 1;
        let mut a = 0;
        while a < total {
            if !included(a) {
                a += 1;
                continue;
            }
            let start = a;
            while a + 1 < total && included(a + 1) {
                a += 1;
            }
            let end = a;
            let (lo, lo_open) = if start % 2 == 0 {
                let i = start / 2;
                if i == 0 {
                    (ExtendedReal::NegInf, true)
                } else {
                    (ExtendedReal::Finite(self.bps[i - 1].clone()), true)
                }
            } else {
                (ExtendedReal::Finite(self.bps[start / 2].clone()), false)
            };
            let (hi, hi_open) = if end % 2 == 0 {
                let j = end / 2;
                if j == m {
                    (ExtendedReal::PosInf, true)
                } else {
                    (ExtendedReal::Finite(self.bps[j].clone()), true)
                }
            } else {
                (ExtendedReal::Finite(self.bps[end / 2].clone()), false)
            };
            pieces.push(Interval { lo, lo_open, hi, hi_open });
            a += 1;
        }
        IntervalSet { pieces }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

/// Summary returned by [`IntervalSet::report`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub is_open: bool,
    pub is_closed: bool,
    pub is_bounded: bool,
    pub sup: Option<ExtendedReal>,
    pub inf: Option<ExtendedReal>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { pieces: Vec::new() }
    }

    pub fn reals() -> Self {
        IntervalSet { pieces: vec![Interval::whole()] }
    }

    pub fn from_interval(i: Interval) -> Self {
        IntervalSet { pieces: vec![i] }
    }

    pub fn from_intervals(items: impl IntoIterator<Item = Interval>) -> Self {
        items.into_iter().fold(IntervalSet::empty(), |acc, i| acc.union(&IntervalSet::from_interval(i)))
    }

    pub fn points(ps: impl IntoIterator<Item = Scalar>) -> Self {
        Self::from_intervals(ps.into_iter().map(Interval::point))
    }

    pub fn singleton(p: Scalar) -> Self {
        IntervalSet::from_interval(Interval::point(p))
    }

    pub fn open(a: Scalar, b: Scalar) -> Self {
        Interval::open(a, b).map(Self::from_interval).unwrap_or_default()
    }

    pub fn closed(a: Scalar, b: Scalar) -> Self {
        Interval::closed(a, b).map(Self::from_interval).unwrap_or_default()
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.pieces
    }

    /// `iv` lies inside one piece (pieces are disjoint and non-touching).
    pub fn contains_interval(&self, iv: &Interval) -> bool {
        self.pieces.iter().any(|p| p.contains_interval(iv))
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// Shared tolerance-free closeness test: `p` is in the closure.
    pub fn is_acl(&self, p: &Scalar) -> bool {
        self.pieces.iter().any(|i| i.closure_contains(p))
    }

    /// Open neighborhood `(c - eps, c + eps)`.
    pub fn neighborhood(c: &Scalar, eps: &Scalar) -> Result<Self, Error> {
        if !eps.is_positive() {
            return Err(Error::Precondition(format!("neighborhood radius must be positive, got {eps}")));
        }
        Ok(Self::open(c - eps, c + eps))
    }

    fn combine(&self, other: &IntervalSet, f: impl Fn(bool, bool) -> bool) -> IntervalSet {
        let atoms = Atoms::of(&[self, other]);
        let (ga, pa) = atoms.membership(self);
        let (gb, pb) = atoms.membership(other);
        let gaps: Vec<bool> = ga.iter().zip(&gb).map(|(a, b)| f(*a, *b)).collect();
        let pts: Vec<bool> = pa.iter().zip(&pb).map(|(a, b)| f(*a, *b)).collect();
        atoms.build(&gaps, &pts)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn set_algebra(&self, other: &IntervalSet, op: SetOp) -> IntervalSet {
        match op {
            SetOp::Union => self.union(other),
            SetOp::Intersection => self.intersection(other),
            SetOp::Difference => self.difference(other),
        }
    }

    pub fn complement(&self) -> IntervalSet {
        let atoms = Atoms::of(&[self]);
        let (g, p) = atoms.membership(self);
        let g: Vec<bool> = g.iter().map(|b| !b).collect();
        let p: Vec<bool> = p.iter().map(|b| !b).collect();
        atoms.build(&g, &p)
    }

    pub fn closure(&self) -> IntervalSet {
        let atoms = Atoms::of(&[self]);
        let (g, p) = atoms.membership(self);
        let p: Vec<bool> = (0..p.len()).map(|i| p[i] || g[i] || g[i + 1]).collect();
        atoms.build(&g, &p)
    }

    pub fn interior(&self) -> IntervalSet {
        let atoms = Atoms::of(&[self]);
        let (g, p) = atoms.membership(self);
        let p: Vec<bool> = (0..p.len()).map(|i| p[i] && g[i] && g[i + 1]).collect();
        atoms.build(&g, &p)
    }

    /// Points close to both the set and its complement, found by testing
    /// every finite endpoint directly.
    pub fn boundary(&self) -> IntervalSet {
        let comp = self.complement();
        let candidates = self
            .pieces
            .iter()
            .flat_map(|p| [p.lo.as_finite().cloned(), p.hi.as_finite().cloned()])
            .flatten()
            .filter(|x| self.is_acl(x) && comp.is_acl(x));
        IntervalSet::points(candidates)
    }

    pub fn is_closed(&self) -> bool {
        self.pieces.iter().all(|p| !(p.lo.is_finite() && p.lo_open) && !(p.hi.is_finite() && p.hi_open))
    }

    pub fn is_open(&self) -> bool {
        self.pieces.iter().all(|p| !p.is_degenerate() && (p.lo_open && p.hi_open))
    }

    pub fn is_bounded(&self) -> bool {
        self.pieces.iter().all(Interval::is_bounded)
    }

    pub fn sup(&self) -> Option<ExtendedReal> {
        self.pieces.last().map(|p| p.hi.clone())
    }

    pub fn inf(&self) -> Option<ExtendedReal> {
        self.pieces.first().map(|p| p.lo.clone())
    }

    /// Topology summary. The sup and inf are checked against their defining
    /// properties before being returned.
    pub fn report(&self) -> TopologyReport {
        let sup = self.sup();
        let inf = self.inf();
        if let Some(ExtendedReal::Finite(s)) = &sup {
            debug_assert!(self.is_upper_bound(s) && self.is_acl(s));
        }
        if let Some(ExtendedReal::Finite(i)) = &inf {
            debug_assert!(self.is_lower_bound(i) && self.is_acl(i));
        }
        TopologyReport {
            is_open: self.is_open(),
            is_closed: self.is_closed(),
            is_bounded: self.is_bounded(),
            sup,
            inf,
        }
    }

    pub fn is_upper_bound(&self, u: &Scalar) -> bool {
        let u = ExtendedReal::Finite(u.clone());
        self.pieces.iter().all(|p| p.hi <= u)
    }

    pub fn is_lower_bound(&self, l: &Scalar) -> bool {
        let l = ExtendedReal::Finite(l.clone());
        self.pieces.iter().all(|p| p.lo >= l)
    }

    /// A member of the set within `eps` of `p`, when one exists.
    pub fn acl_witness(&self, p: &Scalar, eps: &Scalar) -> Option<Scalar> {
        if self.contains(p) {
            return Some(p.clone());
        }
        let nb = IntervalSet::open(p - eps, p + eps);
        let near = self.intersection(&nb);
        let piece = near.pieces.iter().min_by_key(|i| {
            let a = i.lo.as_finite().cloned().unwrap_or_else(|| p - eps);
            let b = i.hi.as_finite().cloned().unwrap_or_else(|| p + eps);
            Scalar::min(&(&a - p).abs(), &(&b - p).abs())
        })?;
        // Pick a point of the piece close to p but inside it.
        let (a, b) = piece.bounds()?;
        if piece.is_degenerate() {
            return Some(a.clone());
        }
        let x = if &(a - p).abs() <= &(b - p).abs() {
            let step = Scalar::min(&(b - a).half(), &(eps - &(a - p).abs()).half());
            if piece.lo_open {
                a + step
            } else {
                a.clone()
            }
        } else {
            let step = Scalar::min(&(b - a).half(), &(eps - &(b - p).abs()).half());
            if piece.hi_open {
                b - step
            } else {
                b.clone()
            }
        };
        debug_assert!(self.contains(&x));
        Some(x)
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(src);
        let s = parse_union(&mut cur, false)?;
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        Ok(s)
    }

    /// Evaluate a set expression with `closure`, `interior`, `boundary`,
    /// `complement`, and the infix operators `U`, `&`, `\`.
    pub fn eval_expr(src: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(src);
        let s = parse_union(&mut cur, true)?;
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        Ok(s)
    }
}

pub(crate) fn parse_set(cur: &mut Cursor<'_>) -> Result<IntervalSet, ParseError> {
    parse_union(cur, false)
}

fn parse_union(cur: &mut Cursor<'_>, with_ops: bool) -> Result<IntervalSet, ParseError> {
    let mut acc = parse_set_term(cur, with_ops)?;
    loop {
        if cur.peek_ident() == Some("U") {
            cur.ident();
            let rhs = parse_set_term(cur, with_ops)?;
            acc = acc.union(&rhs);
        } else if with_ops && cur.eat('&') {
            let rhs = parse_set_term(cur, with_ops)?;
            acc = acc.intersection(&rhs);
        } else if with_ops && cur.eat('\\') {
            let rhs = parse_set_term(cur, with_ops)?;
            acc = acc.difference(&rhs);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_set_term(cur: &mut Cursor<'_>, with_ops: bool) -> Result<IntervalSet, ParseError> {
    match cur.peek() {
        Some('(') | Some('[') => {
            let lo_open = cur.eat('(');
            if !lo_open {
                cur.expect('[')?;
            }
            let lo = cur.extended()?;
            cur.expect(',')?;
            let hi = cur.extended()?;
            let hi_open = if cur.eat(')') {
                true
            } else if cur.eat(']') {
                false
            } else {
                return Err(cur.error("expected ')' or ']'"));
            };
            if lo > hi {
                return Err(cur.error(format!("interval endpoints out of order: {lo} > {hi}")));
            }
            Ok(Interval::new(lo, lo_open, hi, hi_open).map(IntervalSet::from_interval).unwrap_or_default())
        }
        Some('{') => {
            cur.expect('{')?;
            let mut pts = Vec::new();
            if !cur.eat('}') {
                loop {
                    pts.push(cur.signed_number()?);
                    if cur.eat('}') {
                        break;
                    }
                    cur.expect(',')?;
                }
            }
            Ok(IntervalSet::points(pts))
        }
        _ => {
            let save = cur.pos;
            match cur.ident() {
                Some((_, "R")) => Ok(IntervalSet::reals()),
                Some((_, "empty")) => Ok(IntervalSet::empty()),
                Some((_, name)) if with_ops => {
                    let f: fn(&IntervalSet) -> IntervalSet = match name {
                        "closure" => IntervalSet::closure,
                        "interior" => IntervalSet::interior,
                        "boundary" => IntervalSet::boundary,
                        "complement" => IntervalSet::complement,
                        _ => {
                            return Err(ParseError {
                                offset: save,
                                kind: crate::error::ParseErrorKind::UnknownIdentifier(name.to_string()),
                            })
                        }
                    };
                    cur.expect('(')?;
                    let inner = parse_union(cur, true)?;
                    cur.expect(')')?;
                    Ok(f(&inner))
                }
                Some((_, name)) => Err(ParseError {
                    offset: save,
                    kind: crate::error::ParseErrorKind::UnknownIdentifier(name.to_string()),
                }),
                None => Err(cur.error("expected a set")),
            }
        }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "empty");
        }
        // consecutive singletons print as one brace group
        let mut parts: Vec<String> = Vec::new();
        let mut run: Vec<String> = Vec::new();
        for p in &self.pieces {
            if p.is_degenerate() {
                run.push(p.lo.to_string());
            } else {
                if !run.is_empty() {
                    parts.push(format!("{{{}}}", run.join(",")));
                    run.clear();
                }
                parts.push(p.to_string());
            }
        }
        if !run.is_empty() {
            parts.push(format!("{{{}}}", run.join(",")));
        }
        write!(f, "{}", parts.join(" U "))
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        IntervalSet::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> IntervalSet {
        IntervalSet::parse(s).unwrap()
    }

    fn q(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    #[test]
    fn neighborhoods() {
        assert_eq!(IntervalSet::neighborhood(&q("0"), &q("1")).unwrap(), set("(-1,1)"));
        assert_eq!(
            IntervalSet::neighborhood(&q("3141"), &q("1/10")).unwrap(),
            set("(31409/10,31411/10)")
        );
        assert!(IntervalSet::neighborhood(&q("5"), &q("0")).is_err());
    }

    #[test]
    fn acl_examples() {
        assert!(set("(0,3140)").is_acl(&q("3140")));
        assert!(set("(0,3140)").is_acl(&q("1")));
        assert!(!set("[0,3140]").is_acl(&q("3141")));
        assert!(!IntervalSet::empty().is_acl(&q("0")));
    }

    #[test]
    fn closure_interior_examples() {
        assert_eq!(set("(0,3140)").closure(), set("[0,3140]"));
        assert_eq!(set("[0,1]").closure(), set("[0,1]"));
        assert_eq!(set("(0,1) U (1,2)").closure(), set("[0,2]"));
        assert_eq!(set("[0,1] U {2}").interior(), set("(0,1)"));
        assert_eq!(set("(0,1)").interior(), set("(0,1)"));
        assert_eq!(set("[0,1] U [1,2]").interior(), set("(0,2)"));
        assert_eq!(IntervalSet::reals().closure(), IntervalSet::reals());
        assert_eq!(IntervalSet::empty().interior(), IntervalSet::empty());
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(set("[0,1]").boundary(), set("{0,1}"));
        assert_eq!(set("(0,3140) U {3150}").boundary(), set("{0,3140,3150}"));
        assert!(IntervalSet::reals().boundary().is_empty());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(set("[0,3140]").complement(), set("(-inf,0) U (3140,inf)"));
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::reals());
        assert_eq!(set("(0,1]").complement(), set("(-inf,0] U (1,inf)"));
    }

    #[test]
    fn algebra_examples() {
        assert_eq!(set("[0,2]").intersection(&set("[1,3]")), set("[1,2]"));
        assert_eq!(set("[0,1]").union(&set("(1,2)")), set("[0,2)"));
        assert_eq!(set("[0,3]").difference(&set("(1,2)")), set("[0,1] U [2,3]"));
        assert_eq!(set("(0,1)").union(&set("(1,2)")).pieces().len(), 2);
    }

    #[test]
    fn reports() {
        assert_eq!(set("(0,3140)").report().sup, Some(ExtendedReal::Finite(q("3140"))));
        assert_eq!(set("(3140,inf)").report().sup, Some(ExtendedReal::PosInf));
        assert_eq!(set("{9/10, 99/100, 0.999}").report().sup, Some(ExtendedReal::Finite(q("999/1000"))));
        let r = IntervalSet::empty().report();
        assert!(r.sup.is_none() && r.inf.is_none() && r.is_bounded && r.is_open && r.is_closed);
    }

    #[test]
    fn text_round_trip() {
        for s in ["(0,3140) U {3150}", "[-1/2,2)", "{1,2,3}", "(-inf,0] U (1,inf)", "empty", "(-inf,inf)"] {
            let x = set(s);
            assert_eq!(IntervalSet::parse(&x.to_string()).unwrap(), x, "{s}");
        }
        assert!(IntervalSet::parse("(1,0)").is_err());
        assert!(IntervalSet::parse("(0,1").is_err());
    }

    #[test]
    fn expressions() {
        let b = IntervalSet::eval_expr("boundary((0,3140) U {3150})").unwrap();
        assert_eq!(b, set("{0,3140,3150}"));
        let x = IntervalSet::eval_expr("closure((0,1)) & [1/2,3] \\ {1}").unwrap();
        assert_eq!(x, set("[1/2,1)"));
        assert!(IntervalSet::eval_expr("frobnicate((0,1))").is_err());
    }

    #[test]
    fn witnesses_stay_inside() {
        let s = set("(0,1) U {3}");
        for p in ["0", "1", "3", "1/2"] {
            let w = s.acl_witness(&q(p), &q("1/1000")).unwrap();
            assert!(s.contains(&w));
            assert!((&w - &q(p)).abs() < q("1/1000"));
        }
        assert!(s.acl_witness(&q("2"), &q("1/10")).is_none());
    }
}
