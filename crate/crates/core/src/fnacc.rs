//! Accretion of a function at a point: the intersection over shrinking
//! neighborhoods of the closure of the image, plus the limit, continuity,
//! derivative and extremum checks built on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accretion::{
    bounding_box, box_diameter, clusterize, verdict_of, AccretionEstimate, PointIndex, Provenance, ScheduleInfo, Tri,
};
use crate::dsl::{sample_points, Expr, FuncDef, SamplePoint};
use crate::error::{Error, Result};
use crate::exact::{Point, Scalar};
use crate::sequences::{convergence, Schedule, SequenceSpec};
use crate::sets::{Interval, IntervalSet};

/// Deepest level reached when an accretion limit refines past its schedule.
pub const MAX_DEPTH: usize = 64;
/// Sampled magnitudes beyond this count as divergence.
const THRESHOLD: i64 = 1_000_000_000;
const REFINE_STEP: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccretionQuery {
    pub f: FuncDef,
    pub c: SamplePoint,
    pub b: IntervalSet,
    pub delete_c: bool,
    pub deltas: Vec<Scalar>,
    pub samples: usize,
    pub eps: Scalar,
    /// Singleton threshold on cluster diameter.
    pub tol: Scalar,
}

/// `1/2^k` for `k = 1..=n`.
pub fn halving_schedule(n: usize) -> Vec<Scalar> {
    (1..=n as u32).map(Scalar::pow2_inv).collect()
}

impl AccretionQuery {
    pub fn new(f: FuncDef, c: SamplePoint) -> Self {
        AccretionQuery {
            f,
            c,
            b: IntervalSet::reals(),
            delete_c: false,
            deltas: halving_schedule(20),
            samples: 64,
            eps: Scalar::pow10_inv(3),
            tol: Scalar::pow10_inv(6),
        }
    }

    pub fn at(f: &str, c: &str) -> Result<Self> {
        Ok(Self::new(FuncDef::parse(f)?, SamplePoint::parse(c)?))
    }

    pub fn on(mut self, b: IntervalSet) -> Self {
        self.b = b;
        self
    }

    pub fn deleting(mut self, yes: bool) -> Self {
        self.delete_c = yes;
        self
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let j: QueryJson = serde_json::from_str(src).map_err(|e| Error::Input(e.to_string()))?;
        Self::from_raw(j)
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let j: QueryJson = serde_json::from_value(v).map_err(|e| Error::Input(e.to_string()))?;
        Self::from_raw(j)
    }

    fn from_raw(j: QueryJson) -> Result<Self> {
        let mut f = FuncDef::parse(&j.f)?;
        if let Some(d) = &j.domain {
            f = f.with_domain(IntervalSet::eval_expr(d)?)?;
        }
        let mut q = Self::new(f, SamplePoint::parse(&j.c)?);
        if let Some(b) = &j.b {
            q.b = IntervalSet::eval_expr(b)?;
        }
        q.delete_c = j.delete_c;
        if let Some(d) = j.deltas {
            q.deltas = d;
        }
        if let Some(n) = j.samples {
            q.samples = n;
        }
        if let Some(e) = j.eps {
            q.eps = e;
        }
        if let Some(t) = j.tol {
            q.tol = t;
        }
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Precondition(format!("malformed query: {m}")));
        if self.deltas.is_empty() || !self.deltas.iter().all(|d| d.is_positive()) {
            return bad("deltas must be positive and nonempty");
        }
        if self.deltas.windows(2).any(|w| w[0] <= w[1]) {
            return bad("deltas must decrease strictly");
        }
        if self.samples < 8 {
            return bad("at least 8 samples per delta");
        }
        if !self.eps.is_positive() || !self.tol.is_positive() {
            return bad("eps and tol must be positive");
        }
        Ok(())
    }

    /// `V_delta(c) ∩ B ∩ domain`, without `c` when deleting.
    fn region(&self, delta: &Scalar) -> IntervalSet {
        let v = IntervalSet::open(&self.c.value - delta, &self.c.value + delta);
        let r = v.intersection(&self.b).intersection(&self.f.domain);
        if self.delete_c {
            r.difference(&IntervalSet::singleton(self.c.value.clone()))
        } else {
            r
        }
    }

    fn schedule_info(&self, deltas: &[Scalar]) -> ScheduleInfo {
        ScheduleInfo::Deltas { deltas: deltas.to_vec(), samples: self.samples, eps: self.eps.clone() }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryJson {
    f: String,
    c: String,
    #[serde(rename = "B", default)]
    b: Option<String>,
    #[serde(default)]
    domain: Option<String>,
    #[serde(default)]
    delete_c: bool,
    #[serde(default)]
    deltas: Option<Vec<Scalar>>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    eps: Option<Scalar>,
    #[serde(default)]
    tol: Option<Scalar>,
}

impl Serialize for AccretionQuery {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(8))?;
        m.serialize_entry("B", &self.b)?;
        m.serialize_entry("c", &self.c)?;
        m.serialize_entry("delete_c", &self.delete_c)?;
        m.serialize_entry("deltas", &self.deltas)?;
        m.serialize_entry("eps", &self.eps)?;
        m.serialize_entry("f", &self.f.to_string())?;
        m.serialize_entry("samples", &self.samples)?;
        m.serialize_entry("tol", &self.tol)?;
        m.end()
    }
}

/// What one neighborhood radius contributes: sampled images, bounds the
/// enclosure certifies as attained in the closure, and whole image
/// intervals where `f` is continuous on a connected piece.
#[derive(Clone, Debug)]
struct Level {
    delta: Scalar,
    sampled: Vec<Point>,
    seeds: Vec<Point>,
    spans: Vec<(Scalar, Scalar)>,
    empty: bool,
    enclosure_finite: bool,
    max_abs: Scalar,
}

impl Level {
    fn evidence(&self) -> Vec<&Point> {
        self.sampled.iter().chain(&self.seeds).collect()
    }
}

/// Image of one sample; enclosures wider than eps/16 are dropped.
fn image(f: &FuncDef, p: &SamplePoint, eps: &Scalar) -> Option<Scalar> {
    image_within(f, p, &eps.div_int(16))
}

fn image_within(f: &FuncDef, p: &SamplePoint, width: &Scalar) -> Option<Scalar> {
    let v = f.eval(p).ok()?;
    if v.is_exact() {
        return Some(v.lo);
    }
    if v.width() > *width {
        return None;
    }
    Some(Scalar::mid_round_down(&v.lo, &v.hi, 64))
}

fn level(q: &AccretionQuery, delta: &Scalar, k: usize) -> Level {
    let region = q.region(delta);
    let pieces = region.pieces();
    let mut out = Level {
        delta: delta.clone(),
        sampled: Vec::new(),
        seeds: Vec::new(),
        spans: Vec::new(),
        empty: pieces.is_empty(),
        enclosure_finite: true,
        max_abs: Scalar::zero(),
    };
    if out.empty {
        return out;
    }
    let per = q.samples.div_ceil(pieces.len()).max(8);
    let half = Scalar::new(1, 2).expect("const");
    let mut pts: Vec<SamplePoint> = pieces.iter().flat_map(|iv| sample_points(iv, per, &half, k as u64)).collect();
    if q.delete_c {
        pts.retain(|p| p.value != q.c.value);
    } else if region.contains(&q.c.value) {
        pts.push(q.c.clone());
    }
    let images: Vec<Scalar> = pts.par_iter().filter_map(|p| image(&q.f, p, &q.eps)).collect();
    out.max_abs = images.iter().fold(Scalar::zero(), |m, v| Scalar::max(&m, &v.abs()));
    out.sampled = images.into_iter().map(Point::line).collect();
    for iv in pieces {
        let Ok(b) = q.f.enclose(iv) else {
            out.enclosure_finite = false;
            continue;
        };
        let (lo, hi) = (b.enclosure.lo.as_finite(), b.enclosure.hi.as_finite());
        out.enclosure_finite &= lo.is_some() && hi.is_some();
        if b.tight {
            out.seeds.extend([lo, hi].into_iter().flatten().map(|x| Point::line(x.clone())));
            if let (Some(lo), Some(hi), true) = (lo, hi, b.continuous) {
                out.spans.push((lo.clone(), hi.clone()));
            }
        }
    }
    out
}

fn levels(q: &AccretionQuery, deltas: &[Scalar], first: usize) -> Vec<Level> {
    deltas.par_iter().enumerate().map(|(i, d)| level(q, d, first + i + 1)).collect()
}

/// Grid of a span at spacing eps/2, endpoints included, at most 2^18 points.
fn span_grid(lo: &Scalar, hi: &Scalar, eps: &Scalar) -> Vec<Point> {
    let w = hi - lo;
    let step = eps.half();
    let n = w.checked_div(&step).expect("step > 0").floor();
    let n: usize = usize::try_from(n).unwrap_or(usize::MAX).min(1 << 18);
    let step = if n == 0 { step } else { Scalar::max(&step, &w.div_int(n as i64)) };
    let mut out: Vec<Point> = (0..=n).map(|j| Point::line(lo + &(&step * &Scalar::from_int(j as i64)))).collect();
    out.retain(|p| p.x() <= hi);
    out.push(Point::line(hi.clone()));
    out
}

/// Values of the last level that every level reaches within eps, clustered.
fn estimate(q: &AccretionQuery, lv: &[Level]) -> AccretionEstimate {
    let deltas: Vec<Scalar> = lv.iter().map(|l| l.delta.clone()).collect();
    let schedule = q.schedule_info(&deltas);
    let last = lv.last().expect("nonempty schedule");
    if lv.iter().any(|l| l.empty) {
        return AccretionEstimate { clusters: Vec::new(), ranges: Vec::new(), schedule, verdict: verdict_of(&[], &[]) };
    }
    let eps = &q.eps;
    let mut cand: Vec<Point> = last.sampled.iter().chain(&last.seeds).cloned().collect();
    for (lo, hi) in &last.spans {
        cand.extend(span_grid(lo, hi, eps));
    }
    cand.sort();
    cand.dedup();
    // Neighborhoods are nested, so what the last level reaches is all that
    // can survive; a value counts once the middle level reaches it too.
    let mid = &lv[(lv.len() - 1) / 2];
    let ix = PointIndex::new(mid.evidence(), eps);
    let reached = |p: &Point| {
        let x = p.x();
        ix.any_within(p) || mid.spans.iter().any(|(lo, hi)| &(lo - eps) <= x && x <= &(hi + eps))
    };
    let kept: Vec<Point> = cand.into_par_iter().filter(|p| reached(p)).collect();
    let slack = |comp: &[Point]| {
        let (lo, hi) = bounding_box(comp).expect("nonempty");
        box_diameter(&lo, &hi)
    };
    let (mut clusters, ranges) = clusterize(&kept, eps, slack, Provenance::Sampled);
    let sampled = PointIndex::new(last.sampled.iter().collect(), eps);
    for c in clusters.iter_mut() {
        c.persistent_since_tail = 1;
        if !sampled.any_within(&c.representative) {
            c.provenance = Provenance::Enclosure;
        }
    }
    let verdict = verdict_of(&clusters, &ranges);
    AccretionEstimate { clusters, ranges, schedule, verdict }
}

/// `A(f, c, B)` at the query's schedule.
pub fn accretion_of_function(q: &AccretionQuery) -> Result<AccretionEstimate> {
    q.validate()?;
    if q.region(&q.deltas[0]).is_empty() {
        return Ok(estimate(q, &levels(q, &q.deltas[..1], 0)));
    }
    Ok(estimate(q, &levels(q, &q.deltas, 0)))
}

/// Sampled magnitudes keep doubling across the levels.
fn growing(lv: &[Level]) -> bool {
    let m: Vec<&Scalar> = lv.iter().map(|l| &l.max_abs).collect();
    if m.iter().any(|x| **x > Scalar::from_int(THRESHOLD)) {
        return true;
    }
    let n = m.len();
    if n < 8 {
        return false;
    }
    let two = Scalar::from_int(2);
    let (a, b, c) = (m[n / 4], m[n / 2], m[n - 1]);
    a.is_positive() && *b >= &two * a && *c >= &two * b
}

fn bounded_from(lv: &[Level], eps: &Scalar) -> Tri {
    if lv.iter().any(|l| !l.empty && l.enclosure_finite) {
        return Tri::Yes;
    }
    if growing(lv) {
        return Tri::No;
    }
    // sampled evidence: no growth over the second half of the levels
    let n = lv.len();
    if n >= 4 && lv[n - 1].max_abs <= &lv[n / 2].max_abs + eps {
        return Tri::Yes;
    }
    Tri::Inconclusive
}

/// Local boundedness of `f` at `c` on `B`, probing `delta / 2^j` for
/// `j = 0..20`.
pub fn locally_bounded_probe(f: &FuncDef, c: &SamplePoint, b: &IntervalSet, delta: &Scalar) -> Result<Tri> {
    if !delta.is_positive() {
        return Err(Error::Precondition(format!("delta must be positive, got {delta}")));
    }
    let q = AccretionQuery::new(f.clone(), c.clone()).on(b.clone());
    let deltas: Vec<Scalar> = (0..20).map(|j| delta * &Scalar::pow2_inv(j)).collect();
    Ok(bounded_from(&levels(&q, &deltas, 0), &q.eps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccretionLimitResult {
    pub locally_bounded: Tri,
    pub accretion: AccretionEstimate,
    pub limit: Option<Scalar>,
    pub exists: Tri,
}

/// One ε-component among the kept values, not yet below tol.
fn worth_refining(e: &AccretionEstimate, q: &AccretionQuery) -> Option<Scalar> {
    let (lo, hi) = bounding_box(e.representatives())?;
    let d = match (e.clusters.as_slice(), e.ranges.as_slice()) {
        ([c], []) => c.diameter.clone(),
        (_, [r]) if r.lo == lo && r.hi == hi => box_diameter(&lo, &hi),
        _ => return None,
    };
    (d > q.tol).then_some(d)
}

fn limit_with(q: &AccretionQuery) -> Result<AccretionLimitResult> {
    q.validate()?;
    let domain = q.b.intersection(&q.f.domain);
    let punctured = domain.difference(&IntervalSet::singleton(q.c.value.clone()));
    if !punctured.is_acl(&q.c.value) {
        return Err(Error::Precondition(format!(
            "{} is not an accumulation point of the domain, so f does not have an accretion limit there",
            q.c
        )));
    }
    let mut deltas = q.deltas.clone();
    let mut lv = levels(q, &deltas, 0);
    let mut est = estimate(q, &lv);
    // refine past the schedule while a single shrinking component remains
    let mut width = worth_refining(&est, q);
    while let Some(w) = width.clone() {
        if deltas.len() >= MAX_DEPTH.max(q.deltas.len()) {
            break;
        }
        let last = deltas.last().expect("nonempty").clone();
        let more: Vec<Scalar> = (1..=REFINE_STEP as u32).map(|j| &last * &Scalar::pow2_inv(j)).collect();
        lv.extend(levels(q, &more, deltas.len()));
        deltas.extend(more);
        est = estimate(q, &lv);
        width = worth_refining(&est, q);
        if let Some(nw) = &width {
            if nw * &Scalar::from_int(4) > &w * &Scalar::from_int(3) {
                break;
            }
        }
    }
    let locally_bounded = bounded_from(&lv, &q.eps);
    let two_eps = &q.eps + &q.eps;
    let crowded = est.clusters.windows(2).any(|w| w[1].representative.x() - w[0].representative.x() <= two_eps);
    let exists = if locally_bounded == Tri::No {
        Tri::No
    } else if est.clusters.is_empty() {
        Tri::Inconclusive
    } else if let Some(_) = est.singleton(&q.tol) {
        locally_bounded
    } else if !est.ranges.is_empty() {
        Tri::No
    } else if est.clusters.len() == 1 || crowded {
        Tri::Inconclusive
    } else {
        Tri::No
    };
    let limit = match exists {
        Tri::Yes => est.singleton(&q.tol).map(|p| p.x().clone()),
        _ => None,
    };
    Ok(AccretionLimitResult { locally_bounded, accretion: est, limit, exists })
}

/// Accretion limit of `f` at `c` over `B \ {c}`.
pub fn accretion_limit(q: &AccretionQuery) -> Result<AccretionLimitResult> {
    let mut q = q.clone().deleting(true);
    q.b = q.b.difference(&IntervalSet::singleton(q.c.value.clone()));
    limit_with(&q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuity {
    Continuous,
    Discontinuous,
    Inconclusive,
}

/// Accrete-continuity at `c`: the accretion over the whole domain, `c`
/// included, is the single value `f(c)`.
pub fn accrete_continuity(f: &FuncDef, c: &SamplePoint) -> Result<Continuity> {
    if !f.domain.contains(&c.value) {
        return Err(Error::Precondition(format!("{c} is outside the domain")));
    }
    let at = f.eval(c)?;
    let q = AccretionQuery::new(f.clone(), c.clone()).on(f.domain.clone());
    let r = limit_with(&q)?;
    Ok(match (r.exists, &r.limit) {
        (Tri::Yes, Some(l)) => {
            let close = (l - &at.lo).abs() <= q.tol || (l - &at.hi).abs() <= q.tol || at.contains(l);
            if close {
                Continuity::Continuous
            } else {
                Continuity::Discontinuous
            }
        }
        (Tri::No, _) => Continuity::Discontinuous,
        _ => Continuity::Inconclusive,
    })
}

/// `(g(x) - g(c)) / (x - c)` on `I \ {c}`.
pub fn difference_quotient(g: &FuncDef, c: &Scalar, i: &IntervalSet) -> Result<FuncDef> {
    let gc = g.eval_rational(c)?;
    let gc_expr = match gc.exact() {
        Some(v) => Expr::constant(v.clone()),
        None if !g.expr.has_piecewise() => g.expr.substitute(&Expr::constant(c.clone())),
        None => return Err(Error::Precondition(format!("g({c}) is not exact and g is piecewise"))),
    };
    let expr = Expr::div(Expr::sub(g.expr.clone(), gc_expr), Expr::sub(Expr::Var, Expr::constant(c.clone())));
    let dom = g.domain.intersection(i).difference(&IntervalSet::singleton(c.clone()));
    g.map_expr(expr).with_domain(dom)
}

/// Accretion limit of the difference quotient of `g` at `c` over `I`.
pub fn accretion_derivative(g: &FuncDef, c: &Scalar, i: &IntervalSet) -> Result<AccretionLimitResult> {
    if i.pieces().len() != 1 {
        return Err(Error::Precondition(format!("{i} is not an interval")));
    }
    if !i.contains(c) {
        return Err(Error::Precondition(format!("{c} is not in {i}")));
    }
    let quotient = difference_quotient(g, c, i)?;
    accretion_limit(&AccretionQuery::new(quotient, SamplePoint::rational(c.clone())).on(i.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremumCheck {
    pub holds: bool,
    pub left_nonnegative: bool,
    pub right_nonpositive: bool,
    pub derivative: AccretionLimitResult,
}

/// For an interior argmax `c` of `f` on `(a, b)`: left quotients are
/// `>= 0`, right ones `<= 0`, and the accretion derivative is 0.
pub fn interior_extremum_check(f: &FuncDef, a: &Scalar, b: &Scalar, c: &Scalar) -> Result<ExtremumCheck> {
    if !(a < c && c < b) {
        return Err(Error::Precondition(format!("{c} is not inside ({a}, {b})")));
    }
    let tol = Scalar::pow10_inv(6);
    let fc = f.eval_rational(c)?;
    let n = 1024;
    let h = (b - a).div_int(n);
    let mut best: Option<(Scalar, Scalar)> = None;
    for j in 1..n {
        let x = a + &(&h * &Scalar::from_int(j));
        let Ok(v) = f.eval_rational(&x) else { continue };
        if best.as_ref().is_none_or(|(_, m)| v.lo > *m) {
            best = Some((x, v.lo));
        }
    }
    let (xb, vb) = best.ok_or_else(|| Error::Precondition("f has no values on the probe grid".into()))?;
    if fc.hi < vb && (&xb - c).abs() > h {
        return Err(Error::Precondition(format!("{c} is not an interior argmax at grid spacing {h}: f({xb}) is larger")));
    }
    let iv = IntervalSet::open(a.clone(), b.clone());
    let q = difference_quotient(f, c, &iv)?;
    let half = Scalar::new(1, 2).expect("const");
    let (mut left, mut right) = (true, true);
    for k in 10..=30u32 {
        let d = Scalar::pow2_inv(k);
        let sides = [(Interval::open(c - &d, c.clone()), true), (Interval::open(c.clone(), c + &d), false)];
        for (side, is_left) in sides {
            let Some(side) = side else { continue };
            for p in sample_points(&side, 16, &half, k as u64) {
                let Ok(v) = q.eval(&p) else { continue };
                if is_left && v.hi < -&tol {
                    left = false;
                }
                if !is_left && v.lo > tol {
                    right = false;
                }
            }
        }
    }
    let derivative = accretion_derivative(f, c, &iv)?;
    let zero = derivative.exists == Tri::Yes && derivative.limit.as_ref().is_some_and(|l| l.abs() <= tol);
    Ok(ExtremumCheck { holds: left && right && zero, left_nonnegative: left, right_nonpositive: right, derivative })
}

/// Verdict of a limit oracle: existence and, when it exists, the value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitProbe {
    pub exists: Tri,
    pub value: Option<Scalar>,
}

/// Classical epsilon-delta check over sampled punctured neighborhoods:
/// the candidate is the median image at the deepest `delta = 2^-k`,
/// `k <= 64`, whose samples evaluate to within 1e-9, and for each
/// `eps = 10^-j`, `j = 2..6`, some level must keep every deeper sample
/// within eps of it.
pub fn classical_limit(f: &FuncDef, c: &SamplePoint, b: &IntervalSet) -> Result<LimitProbe> {
    let q = AccretionQuery::new(f.clone(), c.clone()).on(b.clone()).deleting(true);
    let width = Scalar::pow10_inv(9);
    let deltas: Vec<Scalar> = (1..=MAX_DEPTH as u32).map(Scalar::pow2_inv).collect();
    let images: Vec<Vec<Scalar>> = deltas
        .par_iter()
        .enumerate()
        .map(|(k, d)| {
            let region = q.region(d);
            let half = Scalar::new(1, 2).expect("const");
            region
                .pieces()
                .iter()
                .flat_map(|iv| sample_points(iv, 16, &half, 1000 + k as u64))
                .filter(|p| p.value != c.value)
                .filter_map(|p| image_within(f, &p, &width))
                .collect()
        })
        .collect();
    let Some(depth) = images.iter().rposition(|v| !v.is_empty()).filter(|&d| d >= 20) else {
        return Ok(LimitProbe { exists: Tri::Inconclusive, value: None });
    };
    let images = &images[..=depth];
    let mut deepest = images[depth].clone();
    deepest.sort();
    let l = deepest[deepest.len() / 2].clone();
    for j in 2..=6u32 {
        let e = Scalar::pow10_inv(j);
        let ok = (0..images.len()).any(|k| images[k..].iter().flatten().all(|v| (v - &l).abs() < e));
        if !ok {
            return Ok(LimitProbe { exists: Tri::No, value: None });
        }
    }
    Ok(LimitProbe { exists: Tri::Yes, value: Some(l) })
}

/// Sequence criterion: `count` random sequences in `B \ {c}` tending to `c`
/// (mixed rational and irrational-tagged terms); the limit exists when
/// every image sequence converges and the limits agree within `tol`.
pub fn sequential_limit(f: &FuncDef, c: &SamplePoint, b: &IntervalSet, count: usize, seed: u64) -> Result<LimitProbe> {
    let tol = Scalar::pow10_inv(6);
    let sched = Schedule { tails: vec![0, 100, 120], horizon: 180, eps: Scalar::pow10_inv(7), ..Schedule::default() };
    let dom = b.intersection(&f.domain);
    let width = Scalar::pow10_inv(9);
    let mut limits: Vec<Scalar> = Vec::new();
    let mut verdicts = Vec::new();
    for s in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64));
        let mut terms = Vec::with_capacity(sched.horizon as usize);
        let mut n = 1u64;
        let mut misses = 0;
        while terms.len() < sched.horizon as usize && misses < 10_000 {
            let u = Scalar::new(rng.gen_range(1..=1024), 1024).expect("const");
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let off = &u * &Scalar::pow2_inv((n / 4 + 1) as u32) * Scalar::from_int(sign);
            let x = if rng.gen_bool(0.5) {
                SamplePoint::rational(&c.value + &off)
            } else {
                SamplePoint::sqrt2_affine(c.value.clone(), off.div_int(2))
            };
            if x.value == c.value || !dom.contains(&x.value) {
                misses += 1;
                continue;
            }
            match image_within(f, &x, &width) {
                Some(v) => {
                    terms.push(Point::line(v));
                    n += 1;
                }
                None => misses += 1,
            }
        }
        if terms.len() < sched.horizon as usize {
            return Ok(LimitProbe { exists: Tri::Inconclusive, value: None });
        }
        let v = convergence(&SequenceSpec::List(terms), &sched)?;
        verdicts.push(v.converges);
        if let Some(l) = v.limit {
            limits.push(l.x().clone());
        }
    }
    if verdicts.contains(&Tri::No) {
        return Ok(LimitProbe { exists: Tri::No, value: None });
    }
    if verdicts.iter().any(|v| *v != Tri::Yes) {
        return Ok(LimitProbe { exists: Tri::Inconclusive, value: None });
    }
    let (lo, hi) = (limits.iter().min().expect("count > 0"), limits.iter().max().expect("count > 0"));
    if hi - lo > tol {
        return Ok(LimitProbe { exists: Tri::No, value: None });
    }
    Ok(LimitProbe { exists: Tri::Yes, value: Some(limits[0].clone()) })
}
