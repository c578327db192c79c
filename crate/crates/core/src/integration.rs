//! Weighted-sum integration: partitions, weight vectors, Darboux weights
//! from enclosures, adaptive and uniform refinement, a tagged Riemann
//! oracle and the FTC and partition-inequality checks.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::accretion::Tri;
use crate::dsl::{FuncDef, SamplePoint};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::fnacc::{accretion_limit, difference_quotient, AccretionQuery};
use crate::sets::{Interval, IntervalSet};

/// Largest partition `integrate` will build.
pub const MAX_PIECES: usize = 1 << 21;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    points: Vec<Scalar>,
}

impl Partition {
    pub fn new(points: Vec<Scalar>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Precondition("a partition needs at least two points".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("partition points must increase strictly".into()));
        }
        Ok(Partition { points })
    }

    pub fn trivial(a: &Scalar, b: &Scalar) -> Result<Self> {
        Self::new(vec![a.clone(), b.clone()])
    }

    /// `n` equal subintervals of `[a, b]`.
    pub fn uniform(a: &Scalar, b: &Scalar, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        let h = (b - a).div_int(n as i64);
        let mut pts: Vec<Scalar> = (0..n).map(|k| a + &(&h * &Scalar::from_int(k as i64))).collect();
        pts.push(b.clone());
        Self::new(pts)
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }

    pub fn a(&self) -> &Scalar {
        &self.points[0]
    }

    pub fn b(&self) -> &Scalar {
        self.points.last().expect("n >= 1")
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    pub fn subintervals(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn refines(&self, other: &Partition) -> bool {
        other.points.iter().all(|p| self.points.binary_search(p).is_ok())
    }

    /// `P1 ∪ P2`, the common refinement of two partitions of `[a, b]`.
    pub fn common_refinement(&self, other: &Partition) -> Result<Partition> {
        if self.a() != other.a() || self.b() != other.b() {
            return Err(Error::Precondition("partitions cover different intervals".into()));
        }
        let mut pts: Vec<Scalar> = self.points.iter().chain(&other.points).cloned().collect();
        pts.sort();
        pts.dedup();
        Self::new(pts)
    }

    pub fn with_point(&self, x: Scalar) -> Result<Partition> {
        if x <= *self.a() || x >= *self.b() {
            return Err(Error::Precondition(format!("{x} is not inside ({}, {})", self.a(), self.b())));
        }
        let mut pts = self.points.clone();
        if let Err(i) = pts.binary_search(&x) {
            pts.insert(i, x);
        }
        Self::new(pts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.points.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightVector(pub Vec<Scalar>);

impl WeightVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_len(p: &Partition, v: &WeightVector) -> Result<()> {
    if v.len() != p.n() {
        return Err(Error::Precondition(format!("{} weights for {} subintervals", v.len(), p.n())));
    }
    Ok(())
}

/// `s(P, v) = Σ v_k (x_k - x_{k-1})`.
pub fn weighted_sum(p: &Partition, v: &WeightVector) -> Result<Scalar> {
    check_len(p, v)?;
    Ok(exact_sum(p.subintervals().zip(&v.0).map(|((x0, x1), w)| w * &(x1 - x0)).collect()))
}

/// Pairwise sum; keeps intermediate denominators small when the terms
/// have many distinct ones.
fn exact_sum(mut terms: Vec<Scalar>) -> Scalar {
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len() / 2 + 1);
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a + b,
                None => a,
            });
        }
        terms = next;
    }
    terms.pop().unwrap_or_else(Scalar::zero)
}

fn covers(f: &FuncDef, a: &Scalar, b: &Scalar) -> Result<()> {
    let iv = IntervalSet::closed(a.clone(), b.clone());
    if f.domain.intersection(&iv) != iv {
        return Err(Error::Precondition(format!("[{a}, {b}] is not inside the domain {}", f.domain)));
    }
    Ok(())
}

/// Finite tight-or-outer bounds of `f` on `[x0, x1]`, `None` if unbounded.
fn piece_bounds(f: &FuncDef, x0: &Scalar, x1: &Scalar) -> Result<Option<(Scalar, Scalar)>> {
    let iv = Interval::closed(x0.clone(), x1.clone()).expect("x0 < x1");
    let b = f.enclose(&iv)?;
    Ok(match (b.enclosure.lo.as_finite(), b.enclosure.hi.as_finite()) {
        (Some(lo), Some(hi)) => Some((lo.clone(), hi.clone())),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightCheck {
    pub admissible: bool,
    /// Some subinterval has no finite enclosure.
    pub unbounded: bool,
}

fn weight_check(f: &FuncDef, p: &Partition, v: &WeightVector, upper: bool) -> Result<WeightCheck> {
    check_len(p, v)?;
    covers(f, p.a(), p.b())?;
    let mut out = WeightCheck { admissible: true, unbounded: false };
    for ((x0, x1), w) in p.subintervals().zip(&v.0) {
        match piece_bounds(f, x0, x1)? {
            None => {
                out.admissible = false;
                out.unbounded = true;
            }
            Some((lo, hi)) => {
                if (upper && *w < hi) || (!upper && *w > lo) {
                    out.admissible = false;
                }
            }
        }
    }
    Ok(out)
}

/// `a_k >= sup f` on every subinterval, judged against the enclosure.
pub fn is_upper_weight(f: &FuncDef, p: &Partition, a: &WeightVector) -> Result<WeightCheck> {
    weight_check(f, p, a, true)
}

/// `b_k <= inf f` on every subinterval.
pub fn is_lower_weight(f: &FuncDef, p: &Partition, b: &WeightVector) -> Result<WeightCheck> {
    weight_check(f, p, b, false)
}

fn unbounded_error() -> Error {
    Error::Domain("not bounded, integral undefined".into())
}

/// Upper and lower Darboux weights `(u, w)` from the enclosures.
pub fn darboux_weights(f: &FuncDef, p: &Partition) -> Result<(WeightVector, WeightVector)> {
    covers(f, p.a(), p.b())?;
    let pieces: Vec<(&Scalar, &Scalar)> = p.subintervals().collect();
    let bounds: Vec<Result<Option<(Scalar, Scalar)>>> =
        pieces.par_iter().map(|(x0, x1)| piece_bounds(f, x0, x1)).collect();
    let (mut u, mut w) = (Vec::with_capacity(p.n()), Vec::with_capacity(p.n()));
    for b in bounds {
        let (lo, hi) = b?.ok_or_else(unbounded_error)?;
        u.push(hi);
        w.push(lo);
    }
    Ok((WeightVector(u), WeightVector(w)))
}

/// Riemann sum with tags: exact when every `f(c_k)` is, otherwise a
/// certified bracket.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedSum {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl TaggedSum {
    pub fn exact(&self) -> Option<&Scalar> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn midpoint(&self) -> Scalar {
        Scalar::mid(&self.lo, &self.hi)
    }
}

pub fn riemann_sum(f: &FuncDef, p: &Partition, tags: &[SamplePoint]) -> Result<TaggedSum> {
    if tags.len() != p.n() {
        return Err(Error::Precondition(format!("{} tags for {} subintervals", tags.len(), p.n())));
    }
    let (mut lo, mut hi) = (Scalar::zero(), Scalar::zero());
    for ((x0, x1), t) in p.subintervals().zip(tags) {
        if t.value < *x0 || t.value > *x1 {
            return Err(Error::Precondition(format!("tag {t} is outside [{x0}, {x1}]")));
        }
        let v = f.eval(t)?;
        let h = x1 - x0;
        lo = lo + &v.lo * &h;
        hi = hi + &v.hi * &h;
    }
    Ok(TaggedSum { lo, hi })
}

/// Like `riemann_sum`, with every term rounded outward to 2^-64 so the
/// running sum keeps a small denominator.
fn rounded_riemann_sum(f: &FuncDef, p: &Partition, tags: &[SamplePoint]) -> Result<TaggedSum> {
    let (mut lo, mut hi) = (Scalar::zero(), Scalar::zero());
    for ((x0, x1), t) in p.subintervals().zip(tags) {
        let v = f.eval(t)?;
        let h = x1 - x0;
        lo = lo + (&v.lo * &h).round_down(64);
        hi = hi + (&v.hi * &h).round_up(64);
    }
    Ok(TaggedSum { lo, hi })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegralStatus {
    Integrable,
    NotIntegrable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralVerdict {
    pub status: IntegralStatus,
    pub estimate: Option<Scalar>,
    /// `s(P,u) - s(P,w)` for the final partition, or for not-integrable a
    /// lower bound that holds at every refinement.
    pub gap: Scalar,
    pub upper: Scalar,
    pub lower: Scalar,
    pub partition_used: Partition,
    pub upper_weights: WeightVector,
    pub lower_weights: WeightVector,
    pub refinement_depth: u32,
}

impl IntegralVerdict {
    /// Partition CSV: `k, x_{k-1}, x_k, w_k, u_k`.
    pub fn partition_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Input(e.to_string());
        w.write_record(["k", "x_prev", "x_k", "w_k", "u_k"]).map_err(io)?;
        for (k, ((x0, x1), (lo, hi))) in
            self.partition_used.subintervals().zip(self.lower_weights.0.iter().zip(&self.upper_weights.0)).enumerate()
        {
            let row = [(k + 1).to_string(), x0.to_string(), x1.to_string(), lo.to_string(), hi.to_string()];
            w.write_record(&row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("ascii"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Piece {
    x0: Scalar,
    x1: Scalar,
    lo: Scalar,
    hi: Scalar,
    depth: u32,
}

impl Piece {
    fn new(f: &FuncDef, x0: Scalar, x1: Scalar, depth: u32) -> Result<Piece> {
        let (lo, hi) = piece_bounds(f, &x0, &x1)?.ok_or_else(unbounded_error)?;
        Ok(Piece { x0, x1, lo, hi, depth })
    }

    fn contribution(&self) -> Scalar {
        ((&self.hi - &self.lo) * (&self.x1 - &self.x0)).round_up(64)
    }
}

/// Heap entry: largest contribution first, leftmost on ties.
struct Ranked(Scalar, Piece);

impl PartialEq for Ranked {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Ranked {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.cmp(&o.0).then_with(|| o.1.x0.cmp(&self.1.x0))
    }
}

/// Certified gap floor over every refinement: the sum of per-piece
/// oscillation floors times widths.
fn certified_gap(f: &FuncDef, pieces: &[Piece]) -> Scalar {
    pieces
        .par_iter()
        .filter_map(|p| {
            let iv = Interval::closed(p.x0.clone(), p.x1.clone())?;
            f.oscillation_floor(&iv).map(|m| m * (&p.x1 - &p.x0))
        })
        .reduce(Scalar::zero, |a, b| a + b)
}

fn verdict(f: &FuncDef, mut pieces: Vec<Piece>, eps: &Scalar) -> IntegralVerdict {
    pieces.sort_by(|a, b| a.x0.cmp(&b.x0));
    let len = |p: &Piece| &p.x1 - &p.x0;
    let upper = exact_sum(pieces.iter().map(|p| &p.hi * &len(p)).collect());
    let lower = exact_sum(pieces.iter().map(|p| &p.lo * &len(p)).collect());
    let gap = &upper - &lower;
    let depth = pieces.iter().map(|p| p.depth).max().unwrap_or(0);
    let (status, estimate, gap) = if gap < *eps {
        (IntegralStatus::Integrable, Some(Scalar::mid(&upper, &lower)), gap)
    } else {
        let floor = certified_gap(f, &pieces);
        if floor.is_positive() {
            (IntegralStatus::NotIntegrable, None, floor)
        } else {
            (IntegralStatus::Inconclusive, None, gap)
        }
    };
    let end = pieces.last().expect("nonempty").x1.clone();
    let (mut pts, mut upper_weights, mut lower_weights) = (Vec::new(), Vec::new(), Vec::new());
    for p in pieces {
        pts.push(p.x0);
        upper_weights.push(p.hi);
        lower_weights.push(p.lo);
    }
    pts.push(end);
    let (upper_weights, lower_weights) = (WeightVector(upper_weights), WeightVector(lower_weights));
    IntegralVerdict {
        status,
        estimate,
        gap,
        upper,
        lower,
        partition_used: Partition::new(pts).expect("bisections stay ordered"),
        upper_weights,
        lower_weights,
        refinement_depth: depth,
    }
}

fn check_args(f: &FuncDef, a: &Scalar, b: &Scalar, eps: &Scalar) -> Result<()> {
    if a >= b {
        return Err(Error::Precondition(format!("need a < b, got [{a}, {b}]")));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    covers(f, a, b)
}

/// Adaptive refinement: bisect the subinterval with the largest
/// `(u_k - w_k)(x_k - x_{k-1})` until the gap is below `eps`, a piece at
/// `max_depth` bisections tops the queue, or the partition reaches
/// `MAX_PIECES` subintervals.
pub fn integrate(f: &FuncDef, a: &Scalar, b: &Scalar, eps: &Scalar, max_depth: u32) -> Result<IntegralVerdict> {
    check_args(f, a, b, eps)?;
    let first = Piece::new(f, a.clone(), b.clone(), 0)?;
    if let Some(m) = f.oscillation_floor(&Interval::closed(a.clone(), b.clone()).expect("a < b")) {
        if m * (b - a) >= *eps {
            return Ok(verdict(f, vec![first], eps));
        }
    }
    // running gap over contributions rounded up, so it bounds the exact
    // gap without accumulating a huge denominator
    let mut gap = first.contribution();
    let mut heap = BinaryHeap::new();
    heap.push(Ranked(gap.clone(), first));
    while gap >= *eps && heap.len() < MAX_PIECES {
        let Ranked(c, p) = heap.pop().expect("nonempty");
        if p.depth >= max_depth || c.is_zero() {
            heap.push(Ranked(c, p));
            break;
        }
        let m = Scalar::mid(&p.x0, &p.x1);
        let (l, r) = rayon::join(
            || Piece::new(f, p.x0.clone(), m.clone(), p.depth + 1),
            || Piece::new(f, m.clone(), p.x1.clone(), p.depth + 1),
        );
        let (l, r) = (l?, r?);
        gap = gap - c + l.contribution() + r.contribution();
        heap.push(Ranked(l.contribution(), l));
        heap.push(Ranked(r.contribution(), r));
    }
    Ok(verdict(f, heap.into_iter().map(|r| r.1).collect(), eps))
}

/// Uniform halving: `2^k` equal subintervals for `k = 0..=max_depth`
/// (capped at `MAX_PIECES`), stopping once the gap is below `eps` or a
/// positive oscillation floor is certified. Intermediate levels only
/// compute an outward-rounded gap.
pub fn integrate_uniform(f: &FuncDef, a: &Scalar, b: &Scalar, eps: &Scalar, max_depth: u32) -> Result<IntegralVerdict> {
    check_args(f, a, b, eps)?;
    let mut k = 0u32;
    loop {
        let p = Partition::uniform(a, b, 1usize << k)?;
        let (u, w) = darboux_weights(f, &p)?;
        let last = k >= max_depth || (2usize << k) > MAX_PIECES;
        let h = &p.points()[1] - &p.points()[0];
        let bound = exact_sum(u.0.iter().zip(&w.0).map(|(hi, lo)| ((hi - lo) * &h).round_up(64)).collect());
        let settle = || -> bool {
            let floor: Scalar = p
                .subintervals()
                .filter_map(|(x0, x1)| f.oscillation_floor(&Interval::closed(x0.clone(), x1.clone())?))
                .fold(Scalar::zero(), |acc, m| acc + m);
            floor.is_positive()
        };
        if last || bound < *eps || settle() {
            let pieces: Vec<Piece> = p
                .subintervals()
                .zip(u.0.into_iter().zip(w.0))
                .map(|((x0, x1), (hi, lo))| Piece { x0: x0.clone(), x1: x1.clone(), lo, hi, depth: k })
                .collect();
            return Ok(verdict(f, pieces, eps));
        }
        k += 1;
    }
}

/// Tagged Riemann oracle over uniform meshes `2^10` and `2^11`, with
/// four random tag sets per mesh (random rational fraction per set,
/// irrational-tagged tags included). Integrable when the finest two
/// meshes agree within `eps` across all tag sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiemannOracle {
    pub integrable: Tri,
    pub estimate: Option<Scalar>,
    pub spread: Scalar,
}

pub fn riemann_oracle(f: &FuncDef, a: &Scalar, b: &Scalar, eps: &Scalar, seed: u64) -> Result<RiemannOracle> {
    check_args(f, a, b, eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut finest: Vec<Vec<Scalar>> = Vec::new();
    for k in [10u32, 11] {
        let p = Partition::uniform(a, b, 1 << k)?;
        let mut sums = Vec::new();
        for _ in 0..4 {
            let frac: f64 = rng.gen();
            let tags: Vec<SamplePoint> = p
                .subintervals()
                .map(|(x0, x1)| {
                    let h = x1 - x0;
                    let u = Scalar::new(rng.gen_range(1..4096), 4096).expect("const");
                    if rng.gen_bool(frac) {
                        SamplePoint::rational(x0 + &(&h * &u))
                    } else {
                        // x0 + h (sqrt 2 - 1) stays inside (x0, x1)
                        SamplePoint::sqrt2_affine(x0 - &h, h)
                    }
                })
                .collect();
            sums.push(rounded_riemann_sum(f, &p, &tags)?.midpoint().round_down(64));
        }
        finest.push(sums);
    }
    let all: Vec<&Scalar> = finest.iter().flatten().collect();
    let lo = all.iter().min().expect("sums");
    let hi = all.iter().max().expect("sums");
    let spread = *hi - *lo;
    let integrable = if spread <= *eps {
        Tri::Yes
    } else if spread > (&(b - a) * &Scalar::pow10_inv(1)) {
        Tri::No
    } else {
        Tri::Inconclusive
    };
    let estimate = (integrable == Tri::Yes).then(|| {
        let n = Scalar::from_int(finest[1].len() as i64);
        finest[1].iter().fold(Scalar::zero(), |acc, s| acc + s).checked_div(&n).expect("n > 0")
    });
    Ok(RiemannOracle { integrable, estimate, spread })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FtcReport {
    pub holds: bool,
    pub integral: IntegralVerdict,
    pub difference: Scalar,
    pub error: Scalar,
    pub spot_checks: usize,
}

/// Accretion derivative of `big_f` near `x0`, against `f(x0)`.
fn spot_check(f: &FuncDef, big_f: &FuncDef, x0: &Scalar, a: &Scalar, b: &Scalar) -> Result<bool> {
    let iv = IntervalSet::closed(a.clone(), b.clone());
    let quotient = difference_quotient(big_f, x0, &iv)?;
    let mut q = AccretionQuery::new(quotient, SamplePoint::rational(x0.clone())).on(iv);
    q.deltas = (8..=24u32).step_by(2).map(Scalar::pow2_inv).collect();
    q.samples = 16;
    let r = accretion_limit(&q)?;
    let want = f.eval_rational(x0)?;
    let tol = Scalar::pow10_inv(4);
    Ok(r.exists == Tri::Yes
        && r.limit.is_some_and(|l| (&l - &want.lo).abs() <= tol || (&l - &want.hi).abs() <= tol || want.contains(&l)))
}

/// `|∫_a^b f - (F(b) - F(a))| <= 2 eps`, after checking `F' = f` at 20
/// interior points.
pub fn ftc_check(f: &FuncDef, big_f: &FuncDef, a: &Scalar, b: &Scalar, eps: &Scalar) -> Result<FtcReport> {
    check_args(f, a, b, eps)?;
    covers(big_f, a, b)?;
    let n = 20;
    let xs: Vec<Scalar> = (1..=n).map(|k| a + &(&(b - a) * &Scalar::new(2 * k - 1, 2 * n).expect("const"))).collect();
    let checks: Vec<Result<bool>> = xs.par_iter().map(|x| spot_check(f, big_f, x, a, b)).collect();
    for (x, ok) in xs.iter().zip(checks) {
        if !ok? {
            return Err(Error::Precondition(format!("F is not an antiderivative at {x}")));
        }
    }
    let integral = integrate(f, a, b, eps, 40)?;
    let Some(est) = integral.estimate.clone() else {
        return Err(Error::Precondition(format!("f is not certified integrable on [{a}, {b}]")));
    };
    let fb = big_f.eval_rational(b)?;
    let fa = big_f.eval_rational(a)?;
    let difference = fb.midpoint() - fa.midpoint();
    // the exact difference lies within half of the two widths
    let slack = (fb.width() + fa.width()).half();
    let error = (&est - &difference).abs();
    let holds = error <= &(eps + eps) + &slack;
    Ok(FtcReport { holds, integral, difference, error, spot_checks: n as usize })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionInequality {
    pub holds: bool,
    pub lower_sum: Scalar,
    pub upper_sum: Scalar,
    pub refinement: Partition,
    /// `s(P, w) <= s(P, u)` for the Darboux weights of the common refinement.
    pub refinement_lower: Scalar,
    pub refinement_upper: Scalar,
}

/// `s(P2, b) <= s(P1, a)` for an upper weight `a` on `P1` and a lower
/// weight `b` on `P2`, with the common refinement used in the argument.
pub fn partition_inequality_check(
    f: &FuncDef,
    p1: &Partition,
    p2: &Partition,
    a: &WeightVector,
    b: &WeightVector,
) -> Result<PartitionInequality> {
    if !is_upper_weight(f, p1, a)?.admissible {
        return Err(Error::Precondition("a is not an upper weight on P1".into()));
    }
    if !is_lower_weight(f, p2, b)?.admissible {
        return Err(Error::Precondition("b is not a lower weight on P2".into()));
    }
    let refinement = p1.common_refinement(p2)?;
    let (u, w) = darboux_weights(f, &refinement)?;
    let upper_sum = weighted_sum(p1, a)?;
    let lower_sum = weighted_sum(p2, b)?;
    Ok(PartitionInequality {
        holds: lower_sum <= upper_sum,
        lower_sum,
        upper_sum,
        refinement_lower: weighted_sum(&refinement, &w)?,
        refinement_upper: weighted_sum(&refinement, &u)?,
        refinement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    fn part(xs: &[&str]) -> Partition {
        Partition::new(xs.iter().map(|s| q(s)).collect()).unwrap()
    }

    fn wv(xs: &[&str]) -> WeightVector {
        WeightVector(xs.iter().map(|s| q(s)).collect())
    }

    fn f(s: &str) -> FuncDef {
        FuncDef::parse(s).unwrap()
    }

    #[test]
    fn sums() {
        assert_eq!(weighted_sum(&part(&["0", "1", "2"]), &wv(&["3", "5"])).unwrap(), q("8"));
        assert_eq!(weighted_sum(&part(&["0", "1"]), &wv(&["7/3"])).unwrap(), q("7/3"));
        assert_eq!(weighted_sum(&part(&["0", "1/2", "1"]), &wv(&["1/2", "1"])).unwrap(), q("3/4"));
        assert!(weighted_sum(&part(&["0", "1"]), &wv(&["1", "2"])).is_err());
    }

    #[test]
    fn weights() {
        let p = part(&["0", "1/2", "1"]);
        assert!(is_upper_weight(&f("x"), &p, &wv(&["1/2", "1"])).unwrap().admissible);
        assert!(!is_upper_weight(&f("x"), &p, &wv(&["1/4", "1"])).unwrap().admissible);
        assert!(is_upper_weight(&f("indicatorQ(x)"), &p, &wv(&["1", "1"])).unwrap().admissible);
        let (u, w) = darboux_weights(&f("x"), &p).unwrap();
        assert_eq!((u, w), (wv(&["1/2", "1"]), wv(&["0", "1/2"])));
        let (u, w) = darboux_weights(&f("thomae(x)"), &p).unwrap();
        // t(1) = 1 sits in [1/2, 1]
        assert_eq!((u, w), (wv(&["1", "1"]), wv(&["0", "0"])));
        let (u, w) = darboux_weights(&f("indicatorQ(x)"), &part(&["0", "1"])).unwrap();
        assert_eq!((u, w), (wv(&["1"]), wv(&["0"])));
        let r = is_upper_weight(&f("1/x").with_domain(IntervalSet::parse("(0, 1]").unwrap()).unwrap(), &part(&["1/2", "1"]), &wv(&["2"]));
        assert!(r.unwrap().admissible);
    }

    #[test]
    fn riemann() {
        let p = part(&["0", "1/2", "1"]);
        let mids = [SamplePoint::rational(q("1/4")), SamplePoint::rational(q("3/4"))];
        assert_eq!(riemann_sum(&f("x"), &p, &mids).unwrap().exact(), Some(&q("1/2")));
        let p4 = Partition::uniform(&q("0"), &q("1"), 4).unwrap();
        let left: Vec<SamplePoint> = p4.subintervals().map(|(x0, _)| SamplePoint::rational(x0.clone())).collect();
        assert_eq!(riemann_sum(&f("x^2"), &p4, &left).unwrap().exact(), Some(&q("7/32")));
        assert!(riemann_sum(&f("x"), &p, &[mids[1].clone(), mids[0].clone()]).is_err());
    }

    #[test]
    fn integrals() {
        let (zero, one) = (q("0"), q("1"));
        let v = integrate(&f("x^2"), &zero, &one, &q("1/1000"), 40).unwrap();
        assert_eq!(v.status, IntegralStatus::Integrable);
        assert!((v.estimate.unwrap() - q("1/3")).abs() <= q("1/1000"));
        let v = integrate(&f("indicatorQ(x)"), &zero, &one, &q("1/1000"), 40).unwrap();
        assert_eq!((v.status, v.gap), (IntegralStatus::NotIntegrable, one.clone()));
        let v = integrate(&f("thomae(x)"), &zero, &one, &q("1/100"), 40).unwrap();
        assert_eq!(v.status, IntegralStatus::Integrable);
        assert!(v.estimate.unwrap().abs() <= q("1/100"));
        let u = integrate_uniform(&f("x^2"), &zero, &one, &q("1/1000"), 16).unwrap();
        assert_eq!(u.status, IntegralStatus::Integrable);
        let recip = f("1/x").with_domain(IntervalSet::parse("(0, 1]").unwrap()).unwrap();
        assert!(integrate(&recip, &zero, &one, &q("1/100"), 40).is_err());
        let csv = integrate(&f("x"), &zero, &one, &q("1/2"), 4).unwrap().partition_csv().unwrap();
        assert!(csv.starts_with("k,x_prev,x_k,w_k,u_k\n1,0,"));
    }

    #[test]
    fn ftc() {
        let (zero, one, eps) = (q("0"), q("1"), q("1/1000"));
        assert!(ftc_check(&f("x^2"), &f("x^3/3"), &zero, &one, &eps).unwrap().holds);
        assert!(ftc_check(&f("cos(x)"), &f("sin(x)"), &zero, &one, &eps).unwrap().holds);
        assert!(ftc_check(&f("x^2"), &f("x^3"), &zero, &one, &eps).is_err());
    }

    #[test]
    fn partition_inequality() {
        let r = partition_inequality_check(&f("x"), &part(&["0", "1"]), &part(&["0", "1/2", "1"]), &wv(&["1"]), &wv(&["0", "1/2"]))
            .unwrap();
        assert!(r.holds);
        assert_eq!((r.lower_sum, r.upper_sum), (q("1/4"), q("1")));
        assert!(partition_inequality_check(&f("x"), &part(&["0", "1"]), &part(&["0", "1"]), &wv(&["1/2"]), &wv(&["0"])).is_err());
    }

    #[test]
    fn oracle() {
        let (zero, one, eps) = (q("0"), q("1"), q("1/1000"));
        let r = riemann_oracle(&f("x^2"), &zero, &one, &eps, 0).unwrap();
        assert_eq!(r.integrable, Tri::Yes);
        assert_eq!(riemann_oracle(&f("indicatorQ(x)"), &zero, &one, &eps, 0).unwrap().integrable, Tri::No);
    }
}
