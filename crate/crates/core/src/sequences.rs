//! Sequences in the line and the plane: accretion as the intersection of
//! tail closures, a chaining oracle for subsequential limits, limsup and
//! liminf, and convergence verdicts.

use std::fmt;

use std::collections::BTreeMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accretion::{
    bounding_box, box_diameter, clusterize, verdict_of, AccretionEstimate, PointIndex, Provenance,
    ScheduleInfo, Tri, within_tol,
};
use crate::dsl::FuncDef;
use crate::error::{Error, Result};
use crate::exact::{ExtendedReal, Point, Scalar};
use crate::sets::IntervalSet;

const INEXACT_BITS: u32 = 64;

/// A generator `n -> x_n` for `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    /// One formula per coordinate, in the variable `n`.
    Formula(Vec<FuncDef>),
    Parity { odd: FuncDef, even: FuncDef },
    /// `values[(n - 1) mod p]`, scaled by `factor(n)` when present.
    Cyclic { values: Vec<Point>, factor: Option<FuncDef> },
    /// 0, then the rationals of (0, 1] in Calkin-Wilf order.
    CalkinWilf,
    /// A finite list repeated periodically.
    List(Vec<Point>),
    /// Members of `set` with `d(x_n, point) < 1/n`.
    AclWitness { set: IntervalSet, point: Scalar },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrTwo {
    One(String),
    Two(Vec<String>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointText {
    One(Scalar),
    Two(Vec<Scalar>),
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum SequenceJson {
    Formula { expr: OneOrTwo },
    Parity { odd: String, even: String },
    Cyclic { values: Vec<PointText>, factor: Option<String> },
    CalkinWilf {},
    List { values: Vec<PointText> },
    AclWitness { set: String, point: Scalar },
}

fn point_of(t: PointText) -> Result<Point> {
    match t {
        PointText::One(x) => Ok(Point::line(x)),
        PointText::Two(v) => Ok(Point::new(v)?),
    }
}

fn points_of(values: Vec<PointText>) -> Result<Vec<Point>> {
    let pts: Vec<Point> = values.into_iter().map(point_of).collect::<Result<_>>()?;
    let Some(first) = pts.first() else {
        return Err(Error::Input("a point list needs at least one value".into()));
    };
    if pts.iter().any(|p| p.dim() != first.dim()) {
        return Err(Error::Input("points of mixed dimension".into()));
    }
    Ok(pts)
}

fn seq_formula(src: &str) -> Result<FuncDef> {
    Ok(FuncDef::parse_sequence(src)?)
}

impl SequenceSpec {
    pub fn formula(src: &str) -> Result<Self> {
        Ok(SequenceSpec::Formula(vec![seq_formula(src)?]))
    }

    pub fn formula2(re: &str, im: &str) -> Result<Self> {
        Ok(SequenceSpec::Formula(vec![seq_formula(re)?, seq_formula(im)?]))
    }

    pub fn parity(odd: &str, even: &str) -> Result<Self> {
        Ok(SequenceSpec::Parity { odd: seq_formula(odd)?, even: seq_formula(even)? })
    }

    /// Parses the JSON catalog form, e.g. `{"kind":"formula","expr":"1/n"}`.
    pub fn from_json(src: &str) -> Result<Self> {
        let j: SequenceJson = serde_json::from_str(src).map_err(|e| Error::Input(e.to_string()))?;
        Self::from_value(j)
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let j: SequenceJson = serde_json::from_value(v).map_err(|e| Error::Input(e.to_string()))?;
        Self::from_value(j)
    }

    fn from_value(j: SequenceJson) -> Result<Self> {
        Ok(match j {
            SequenceJson::Formula { expr: OneOrTwo::One(e) } => Self::formula(&e)?,
            SequenceJson::Formula { expr: OneOrTwo::Two(v) } => match v.as_slice() {
                [e] => Self::formula(e)?,
                [a, b] => Self::formula2(a, b)?,
                _ => return Err(Error::Input("formula needs one or two components".into())),
            },
            SequenceJson::Parity { odd, even } => Self::parity(&odd, &even)?,
            SequenceJson::Cyclic { values, factor } => SequenceSpec::Cyclic {
                values: points_of(values)?,
                factor: factor.as_deref().map(seq_formula).transpose()?,
            },
            SequenceJson::CalkinWilf {} => SequenceSpec::CalkinWilf,
            SequenceJson::List { values } => SequenceSpec::List(points_of(values)?),
            SequenceJson::AclWitness { set, point } => {
                let set = IntervalSet::eval_expr(&set)?;
                if !set.is_acl(&point) {
                    return Err(Error::Precondition(format!("{point} is not arbitrarily close to {set}")));
                }
                SequenceSpec::AclWitness { set, point }
            }
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            SequenceSpec::Formula(c) => c.len(),
            SequenceSpec::Cyclic { values, .. } | SequenceSpec::List(values) => values[0].dim(),
            _ => 1,
        }
    }

    /// The term `x_n`, `n >= 1`. Inexact values (transcendental atoms) are
    /// represented by the midpoint of their certified enclosure, rounded
    /// to a multiple of `2^-64`.
    pub fn term(&self, n: u64) -> Result<Point> {
        if n == 0 {
            return Err(Error::Precondition("sequence indices start at 1".into()));
        }
        let ns = Scalar::from_int(n as i64);
        let value = |f: &FuncDef| -> Result<Scalar> {
            let v = f.eval_rational(&ns).map_err(|e| Error::Domain(format!("x_{n}: {e}")))?;
            Ok(if v.is_exact() { v.lo } else { Scalar::mid_round_down(&v.lo, &v.hi, INEXACT_BITS) })
        };
        let at = |list: &[Point]| list[((n - 1) % list.len() as u64) as usize].clone();
        Ok(match self {
            SequenceSpec::Formula(parts) => Point(parts.iter().map(value).collect::<Result<_>>()?),
            SequenceSpec::Parity { odd, even } => Point::line(value(if n % 2 == 1 { odd } else { even })?),
            SequenceSpec::Cyclic { values, factor } => {
                let base = at(values);
                match factor {
                    Some(f) => {
                        let k = value(f)?;
                        Point(base.0.iter().map(|c| c * &k).collect())
                    }
                    None => base,
                }
            }
            SequenceSpec::CalkinWilf => Point::line(calkin_wilf_unit(n)),
            SequenceSpec::List(values) => at(values),
            SequenceSpec::AclWitness { set, point } => {
                let eps = Scalar::new(1, n as i64)?;
                let x = set.acl_witness(point, &eps).ok_or_else(|| Error::Domain(format!("no witness at n = {n}")))?;
                Point::line(x)
            }
        })
    }

    /// `x_1 .. x_h` in order.
    pub fn terms(&self, h: u64) -> Result<Vec<Point>> {
        (1..=h).into_par_iter().map(|n| self.term(n)).collect()
    }
}

/// Stern's diatomic sequence.
fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n > 0 {
        if n & 1 == 1 {
            b += a;
        } else {
            a += b;
        }
        n >>= 1;
    }
    b
}

/// Left children of the Calkin-Wilf tree are exactly the rationals below
/// 1, with `q_{2k} = fusc(k) / (fusc(k) + fusc(k + 1))`.
fn calkin_wilf_unit(n: u64) -> Scalar {
    match n {
        1 => Scalar::zero(),
        2 => Scalar::one(),
        _ => {
            let k = n - 2;
            let (a, b) = (fusc(k), fusc(k + 1));
            Scalar::new(a as i64, (a + b) as i64).expect("positive denominator")
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts = |v: &[Point]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            SequenceSpec::Formula(parts) if parts.len() == 1 => write!(f, "formula({})", parts[0]),
            SequenceSpec::Formula(parts) => write!(f, "formula({}, {})", parts[0], parts[1]),
            SequenceSpec::Parity { odd, even } => write!(f, "parity(odd: {odd}, even: {even})"),
            SequenceSpec::Cyclic { values, factor: Some(k) } => write!(f, "cyclic([{}] * {k})", pts(values)),
            SequenceSpec::Cyclic { values, factor: None } => write!(f, "cyclic([{}])", pts(values)),
            SequenceSpec::CalkinWilf => write!(f, "calkin-wilf"),
            SequenceSpec::List(values) => write!(f, "list([{}])", pts(values)),
            SequenceSpec::AclWitness { set, point } => write!(f, "acl-witness({point}, {set})"),
        }
    }
}

impl Serialize for SequenceSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Tail indices, horizon, cluster radius and divergence threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schedule {
    pub tails: Vec<u64>,
    pub horizon: u64,
    pub eps: Scalar,
    pub threshold: Scalar,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            tails: vec![0, 10, 100, 1000],
            horizon: 10_000,
            eps: Scalar::pow10_inv(3),
            threshold: Scalar::from_int(1_000_000_000),
        }
    }
}

impl Schedule {
    pub fn with_horizon(mut self, h: u64) -> Self {
        self.horizon = h;
        self
    }

    pub fn with_eps(mut self, eps: Scalar) -> Self {
        self.eps = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Precondition(format!("malformed schedule: {m}")));
        if self.tails.is_empty() {
            return bad("no tail indices");
        }
        if self.tails.windows(2).any(|w| w[0] >= w[1]) {
            return bad("tail indices must increase strictly");
        }
        if self.horizon <= *self.tails.last().expect("nonempty") {
            return bad("horizon must exceed the last tail index");
        }
        if !self.eps.is_positive() {
            return bad("eps must be positive");
        }
        if !self.threshold.is_positive() {
            return bad("threshold must be positive");
        }
        Ok(())
    }

    fn last_tail(&self) -> u64 {
        *self.tails.last().expect("validated")
    }

    /// Recurrence windows `(a, b]` covering `(tail, horizon]`, doubling in
    /// length; a short final window is merged into its predecessor.
    pub fn windows(&self, tail: u64) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        let mut a = tail;
        let mut b = 2 * tail.max(1);
        while a < self.horizon {
            let end = b.min(self.horizon);
            match out.last_mut() {
                Some(prev) if 2 * (end - a) < prev.1 - prev.0 => prev.1 = end,
                _ => out.push((a, end)),
            }
            a = end;
            b *= 2;
        }
        out
    }

    pub fn info(&self) -> ScheduleInfo {
        ScheduleInfo::Tails { tails: self.tails.clone(), horizon: self.horizon, eps: self.eps.clone() }
    }
}

/// Convergence verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitVerdict {
    pub converges: Tri,
    pub limit: Option<Point>,
    pub bounded: Tri,
}

/// Terms together with the finite-ness mask relative to the threshold.
struct Sampled {
    terms: Vec<Point>,
    finite: Vec<bool>,
}

impl Sampled {
    fn new(s: &SequenceSpec, sched: &Schedule) -> Result<Self> {
        sched.validate()?;
        let terms = s.terms(sched.horizon)?;
        let finite = terms.iter().map(|p| p.coords().iter().all(|c| c.abs() <= sched.threshold)).collect();
        Ok(Sampled { terms, finite })
    }

    /// Finite terms with indices in `(a, b]`.
    fn window(&self, (a, b): (u64, u64)) -> Vec<&Point> {
        (a as usize..b as usize).filter(|&i| self.finite[i]).map(|i| &self.terms[i]).collect()
    }
}

fn indexes<'a>(data: &'a Sampled, wins: &[(u64, u64)], eps: &Scalar) -> Vec<PointIndex<'a>> {
    wins.iter().map(|&w| PointIndex::new(data.window(w), eps)).collect()
}

/// Accretion estimate: finite terms of the last tail that come back within
/// eps in every recurrence window, clustered at radius eps.
pub fn accretion_of_sequence(s: &SequenceSpec, sched: &Schedule) -> Result<AccretionEstimate> {
    let data = Sampled::new(s, sched)?;
    Ok(accretion_from(&data, sched))
}

fn accretion_from(data: &Sampled, sched: &Schedule) -> AccretionEstimate {
    let eps = &sched.eps;
    let last = sched.last_tail();
    let wins = sched.windows(last);
    let idx = indexes(data, &wins, eps);
    let core: Vec<Point> = data
        .window((last, sched.horizon))
        .into_par_iter()
        .filter(|p| idx.iter().all(|w| w.any_within(p)))
        .map(|p| p.clone())
        .collect();
    let slack = |comp: &[Point]| {
        let (lo, hi) = bounding_box(comp).expect("nonempty");
        box_diameter(&lo, &hi)
    };
    let (mut clusters, ranges) = clusterize(&core, eps, slack, Provenance::Terms);
    let per_tail: Vec<Vec<PointIndex>> = sched.tails.iter().map(|&t| indexes(data, &sched.windows(t), eps)).collect();
    for c in clusters.iter_mut() {
        let since = sched
            .tails
            .iter()
            .zip(&per_tail)
            .find(|(_, ws)| ws.iter().all(|w| w.any_within(&c.representative)))
            .map(|(t, _)| *t)
            .unwrap_or(last);
        c.persistent_since_tail = since;
    }
    let verdict = verdict_of(&clusters, &ranges);
    AccretionEstimate { clusters, ranges, schedule: sched.info(), verdict }
}

/// Oracle for the set of subsequential limits: from seeds in the last
/// window, chain backward through earlier windows by nearest points under
/// tolerances eps / 2^j that shrink toward later windows. Seeds of
/// complete chains are clustered like terms, snapping with twice the
/// largest chain step.
pub fn subsequential_limits(s: &SequenceSpec, sched: &Schedule) -> Result<AccretionEstimate> {
    let data = Sampled::new(s, sched)?;
    let eps = &sched.eps;
    let last = sched.last_tail();
    let wins = sched.windows(last);
    let idx = indexes(&data, &wins, eps);
    // seeds spread over value order, so periodic index patterns cannot alias
    let mut seeds_all = data.window(*wins.last().expect("at least one window"));
    seeds_all.sort();
    seeds_all.dedup();
    let stride = seeds_all.len().div_ceil(16384).max(1);
    let seeds: Vec<&Point> = seeds_all.into_iter().step_by(stride).collect();
    let tols: Vec<Scalar> = (0..wins.len()).map(|j| eps * &Scalar::pow2_inv(j as u32)).collect();
    let chained: Vec<(Point, Scalar)> = seeds
        .into_par_iter()
        .filter_map(|seed| {
            let mut cur = seed.clone();
            let mut dmax = Scalar::zero();
            for j in (0..wins.len() - 1).rev() {
                let next = idx[j].point(idx[j].nearest(&cur)?).clone();
                if !within_tol(&next, &cur, &tols[j]) {
                    return None;
                }
                let step = next.chebyshev(&cur).expect("same dimension");
                if step > dmax {
                    dmax = step;
                }
                cur = next;
            }
            Some((seed.clone(), dmax))
        })
        .collect();
    let steps: BTreeMap<&Point, &Scalar> = chained.iter().map(|(p, d)| (p, d)).collect();
    let candidates: Vec<Point> = chained.iter().map(|t| t.0.clone()).collect();
    // a doubling window sits about one step from the limit
    let slack = |comp: &[Point]| {
        let d = comp.iter().filter_map(|p| steps.get(p)).fold(Scalar::zero(), |a, b| Scalar::max(&a, b));
        Scalar::min(&(&d + &d), eps)
    };
    let (mut clusters, ranges) = clusterize(&candidates, eps, slack, Provenance::Chained);
    for c in clusters.iter_mut() {
        c.persistent_since_tail = last;
    }
    let verdict = verdict_of(&clusters, &ranges);
    Ok(AccretionEstimate { clusters, ranges, schedule: sched.info(), verdict })
}

/// Running maximum of `sign * x_n[coord]`, floored at 0, over the first m terms.
fn running_max(data: &Sampled, coord: usize, sign: i32, m: usize) -> Scalar {
    data.terms[..m]
        .iter()
        .map(|p| if sign > 0 { p.0[coord].clone() } else { -p.0[coord].clone() })
        .fold(Scalar::zero(), |acc, v| Scalar::max(&acc, &v))
}

/// Boundedness of one side: "no" once the running maximum passes the
/// threshold or keeps doubling across the horizon, "yes" when the second
/// half of the horizon adds at most eps, otherwise inconclusive.
fn side_bounded(data: &Sampled, sched: &Schedule, coord: usize, sign: i32) -> Tri {
    let h = data.terms.len();
    let top = running_max(data, coord, sign, h);
    if top > sched.threshold {
        return Tri::No;
    }
    if h >= 64 {
        let a = running_max(data, coord, sign, h / 64);
        let b = running_max(data, coord, sign, h / 8);
        let two = Scalar::from_int(2);
        if a.is_positive() && b >= &a * &two && top >= &b * &two {
            return Tri::No;
        }
    }
    if &top - &running_max(data, coord, sign, h / 2) <= sched.eps {
        Tri::Yes
    } else {
        Tri::Inconclusive
    }
}

fn bounded_of(sides: impl IntoIterator<Item = Tri>) -> Tri {
    let sides: Vec<Tri> = sides.into_iter().collect();
    if sides.contains(&Tri::No) {
        Tri::No
    } else if sides.iter().all(|t| *t == Tri::Yes) {
        Tri::Yes
    } else {
        Tri::Inconclusive
    }
}

fn boundedness(data: &Sampled, sched: &Schedule) -> Tri {
    let dim = data.terms.first().map(|p| p.dim()).unwrap_or(1);
    bounded_of((0..dim).flat_map(|c| [side_bounded(data, sched, c, 1), side_bounded(data, sched, c, -1)]))
}

/// `max |x_n|`-style probe over the horizon.
pub fn bounded_probe(s: &SequenceSpec, sched: &Schedule) -> Result<Tri> {
    let data = Sampled::new(s, sched)?;
    Ok(boundedness(&data, sched))
}

/// `(limsup, liminf)`: extreme cluster representatives, or infinities on
/// sides where the boundedness probe fails.
pub fn limsup_liminf(s: &SequenceSpec, sched: &Schedule) -> Result<(ExtendedReal, ExtendedReal)> {
    if s.dim() != 1 {
        return Err(Error::Precondition("limsup and liminf need a sequence on the line".into()));
    }
    let data = Sampled::new(s, sched)?;
    let est = accretion_from(&data, sched);
    extremes(&data, &est, sched)
}

fn extremes(data: &Sampled, est: &AccretionEstimate, sched: &Schedule) -> Result<(ExtendedReal, ExtendedReal)> {
    let up = side_bounded(data, sched, 0, 1) == Tri::No;
    let down = side_bounded(data, sched, 0, -1) == Tri::No;
    let vals = est.values();
    let (Some(max), Some(min)) = (vals.last(), vals.first()) else {
        return match (up, down) {
            (true, false) => Ok((ExtendedReal::PosInf, ExtendedReal::PosInf)),
            (false, true) => Ok((ExtendedReal::NegInf, ExtendedReal::NegInf)),
            (true, true) => Ok((ExtendedReal::PosInf, ExtendedReal::NegInf)),
            (false, false) => Err(Error::Precondition("no cluster at this horizon".into())),
        };
    };
    let sup = if up { ExtendedReal::PosInf } else { ExtendedReal::Finite(max.clone()) };
    let inf = if down { ExtendedReal::NegInf } else { ExtendedReal::Finite(min.clone()) };
    Ok((sup, inf))
}

/// Converges exactly when the probe says bounded and the estimate is a
/// single cluster of diameter at most eps.
pub fn convergence(s: &SequenceSpec, sched: &Schedule) -> Result<LimitVerdict> {
    let data = Sampled::new(s, sched)?;
    let est = accretion_from(&data, sched);
    Ok(verdict_from(&est, boundedness(&data, sched), &sched.eps))
}

pub(crate) fn verdict_from(est: &AccretionEstimate, bounded: Tri, tol: &Scalar) -> LimitVerdict {
    let single = est.singleton(tol);
    let converges = match (bounded, single) {
        (Tri::Yes, Some(_)) => Tri::Yes,
        (Tri::No, _) => Tri::No,
        (_, None) if est.clusters.len() != 1 => Tri::No,
        _ => Tri::Inconclusive,
    };
    let limit = if converges == Tri::Yes { single.cloned() } else { None };
    LimitVerdict { converges, limit, bounded }
}

/// Estimate, probe and extreme values in one pass, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub sequence: SequenceSpec,
    pub accretion: AccretionEstimate,
    pub convergence: LimitVerdict,
    pub limsup: Option<ExtendedReal>,
    pub liminf: Option<ExtendedReal>,
}

pub fn analyze(s: &SequenceSpec, sched: &Schedule) -> Result<SequenceReport> {
    let data = Sampled::new(s, sched)?;
    let accretion = accretion_from(&data, sched);
    let convergence = verdict_from(&accretion, boundedness(&data, sched), &sched.eps);
    let (limsup, liminf) = match extremes(&data, &accretion, sched) {
        Ok((a, b)) if s.dim() == 1 => (Some(a), Some(b)),
        _ => (None, None),
    };
    Ok(SequenceReport { sequence: s.clone(), accretion, convergence, limsup, liminf })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    fn vals(e: &AccretionEstimate) -> Vec<String> {
        e.values().iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn calkin_wilf_prefix() {
        let got: Vec<String> = (1..=9).map(|n| calkin_wilf_unit(n).to_string()).collect();
        assert_eq!(got, ["0", "1", "1/2", "1/3", "2/3", "1/4", "3/5", "2/5", "3/4"]);
    }

    #[test]
    fn windows_cover_the_tail() {
        let s = Schedule::default();
        assert_eq!(s.windows(1000), vec![(1000, 2000), (2000, 4000), (4000, 8000), (8000, 10000)]);
        assert_eq!(s.windows(0)[0], (0, 2));
        assert_eq!(s.clone().with_horizon(8001).windows(1000).last(), Some(&(4000, 8001)));
        assert!(Schedule { tails: vec![10, 5], ..Schedule::default() }.validate().is_err());
    }

    #[test]
    fn small_examples() {
        let sched = Schedule::default();
        let e = subsequential_limits(&SequenceSpec::formula("(-1)^n*(1 + 1/n)").unwrap(), &sched).unwrap();
        assert_eq!(vals(&e), ["-1", "1"]);
        let e = accretion_of_sequence(&SequenceSpec::formula("7").unwrap(), &sched).unwrap();
        assert_eq!(vals(&e), ["7"]);
        assert_eq!(e.clusters[0].persistent_since_tail, 0);
        let f = SequenceSpec::formula("1/n").unwrap();
        assert_eq!(vals(&subsequential_limits(&f, &sched).unwrap()), ["0"]);
        let v = convergence(&SequenceSpec::formula("3140 - 1/n").unwrap(), &sched).unwrap();
        assert_eq!(v.converges, Tri::Yes);
        assert_eq!(v.limit, Some(Point::line(q("3140"))));
        let e = accretion_of_sequence(&SequenceSpec::formula("n").unwrap(), &sched).unwrap();
        assert!(e.clusters.is_empty());
        let (a, b) = limsup_liminf(&SequenceSpec::formula("(-1)^n*(1 + 1/n)").unwrap(), &sched).unwrap();
        assert_eq!((a, b), (ExtendedReal::Finite(q("1")), ExtendedReal::Finite(q("-1"))));
    }

    #[test]
    fn json_catalog() {
        let s = SequenceSpec::from_json(r#"{"kind":"formula","expr":"1/n + 3140 + (-1)^n"}"#).unwrap();
        assert_eq!(s.term(2).unwrap(), Point::line(q("6283/2")));
        let s = SequenceSpec::from_json(r#"{"kind":"cyclic","values":[["0","1"],["-1","0"]],"factor":"(n-1)/n"}"#)
            .unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.term(2).unwrap(), Point::plane(q("-1/2"), q("0")));
        assert!(SequenceSpec::from_json(r#"{"kind":"nope"}"#).is_err());
        let w = SequenceSpec::from_json(r#"{"kind":"acl-witness","set":"(0,1)","point":"1"}"#).unwrap();
        let x = w.term(10).unwrap();
        assert!(x.x() < &q("1") && x.x() > &q("9/10"));
    }
}
