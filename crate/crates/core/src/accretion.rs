//! Estimate types shared by sequence and function accretion, together with
//! the clustering machinery on exact points.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::dsl::simplest_rational;
use crate::exact::{Point, Scalar};
use crate::sets::Interval;

/// Three-valued answer of a sampled probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Empty,
    FiniteSet,
    IntervalLike,
    Inconclusive,
}

/// Where a cluster came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Terms,
    Chained,
    Sampled,
    Enclosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub representative: Point,
    pub diameter: Scalar,
    /// Tail index (sequences) or delta level (functions) from which the
    /// cluster is seen at every later stage.
    pub persistent_since_tail: u64,
    pub provenance: Provenance,
}

/// Bounding box of a component wider than the cluster radius; its tiles
/// are listed among the clusters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Range {
    pub lo: Point,
    pub hi: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScheduleInfo {
    Tails { tails: Vec<u64>, horizon: u64, eps: Scalar },
    Deltas { deltas: Vec<Scalar>, samples: usize, eps: Scalar },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccretionEstimate {
    pub clusters: Vec<Cluster>,
    pub ranges: Vec<Range>,
    pub schedule: ScheduleInfo,
    pub verdict: Verdict,
}

impl AccretionEstimate {
    pub fn representatives(&self) -> Vec<&Point> {
        self.clusters.iter().map(|c| &c.representative).collect()
    }

    /// One-dimensional representatives in increasing order.
    pub fn values(&self) -> Vec<Scalar> {
        self.clusters.iter().filter(|c| c.representative.dim() == 1).map(|c| c.representative.x().clone()).collect()
    }

    /// A single cluster of diameter at most `tol` and no wide component.
    pub fn singleton(&self, tol: &Scalar) -> Option<&Point> {
        match (self.clusters.as_slice(), self.ranges.is_empty()) {
            ([c], true) if c.diameter <= *tol => Some(&c.representative),
            _ => None,
        }
    }

    /// Every representative of either estimate lies within `eps` of a
    /// representative or a range of the other.
    pub fn eps_matches(&self, other: &AccretionEstimate, eps: &Scalar) -> bool {
        covered(self, other, eps) && covered(other, self, eps)
    }
}

fn covered(a: &AccretionEstimate, b: &AccretionEstimate, eps: &Scalar) -> bool {
    uncovered(a, b, eps).is_empty()
}

/// Representatives of `a` with nothing of `b` within eps.
pub fn uncovered<'a>(a: &'a AccretionEstimate, b: &AccretionEstimate, eps: &Scalar) -> Vec<&'a Point> {
    a.clusters
        .iter()
        .map(|c| &c.representative)
        .filter(|p| {
            !(b.clusters.iter().any(|d| near(p, &d.representative, eps))
                || b.ranges.iter().any(|r| box_distance_sq(p, &r.lo, &r.hi) <= eps.square()))
        })
        .collect()
}

pub(crate) fn near(p: &Point, q: &Point, eps: &Scalar) -> bool {
    p.dim() == q.dim() && p.squared_distance(q).map(|d| d <= eps.square()).unwrap_or(false)
}

/// Squared distance from `p` to the box `[lo, hi]`.
pub(crate) fn box_distance_sq(p: &Point, lo: &Point, hi: &Point) -> Scalar {
    let mut acc = Scalar::zero();
    for ((x, a), b) in p.coords().iter().zip(lo.coords()).zip(hi.coords()) {
        if x < a {
            acc = acc + (a - x).square();
        } else if x > b {
            acc = acc + (x - b).square();
        }
    }
    acc
}

/// Coordinatewise bounding box.
pub(crate) fn bounding_box<'a>(pts: impl IntoIterator<Item = &'a Point>) -> Option<(Point, Point)> {
    let mut it = pts.into_iter();
    let first = it.next()?;
    let (mut lo, mut hi) = (first.clone(), first.clone());
    for p in it {
        for (k, x) in p.coords().iter().enumerate() {
            if *x < lo.0[k] {
                lo.0[k] = x.clone();
            }
            if *x > hi.0[k] {
                hi.0[k] = x.clone();
            }
        }
    }
    Some((lo, hi))
}

/// Upper bound on the diameter of a box: exact on the line, a rational
/// bound on the diagonal in the plane.
pub(crate) fn box_diameter(lo: &Point, hi: &Point) -> Scalar {
    if lo.dim() == 1 {
        return hi.x() - lo.x();
    }
    let sq = lo.squared_distance(hi).expect("same dimension");
    sq.sqrt_bounds(64).expect("nonnegative").1
}

/// Spatial index answering "is some indexed point within eps of ...".
/// Sorted values on the line, a hash grid of cell size eps in the plane,
/// where floating-point distances prefilter and only borderline cases are
/// decided in exact arithmetic.
pub(crate) struct PointIndex<'a> {
    pts: Vec<&'a Point>,
    eps: Scalar,
    eps2: Scalar,
    eps2f: f64,
    approx: Vec<(f64, f64)>,
    sorted: Vec<usize>,
    keys: Vec<f64>,
    grid: HashMap<(i64, i64), Vec<usize>>,
    dim: usize,
}

fn cell(x: &Scalar, eps: &Scalar) -> i64 {
    let q = x.checked_div(eps).expect("eps > 0").floor();
    q.to_i64().unwrap_or(if q.sign() == num_bigint::Sign::Minus { i64::MIN / 2 } else { i64::MAX / 2 })
}

fn approx(p: &Point) -> (f64, f64) {
    (p.0[0].to_f64(), p.0.get(1).map(|y| y.to_f64()).unwrap_or(0.0))
}

fn dist2_f64(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

/// Allowance for rounding in `dist2_f64` near `a`.
fn slack_f64(a: (f64, f64), eps2f: f64) -> f64 {
    1e-12 * (1.0 + a.0.abs() + a.1.abs()) * eps2f.sqrt() + 1e-24 * (1.0 + a.0 * a.0 + a.1 * a.1) + 1e-9 * eps2f
}

impl<'a> PointIndex<'a> {
    pub fn new(pts: Vec<&'a Point>, eps: &Scalar) -> Self {
        let dim = pts.first().map(|p| p.dim()).unwrap_or(1);
        let eps2 = eps.square();
        let eps2f = eps2.to_f64();
        let approx_pts: Vec<(f64, f64)> = pts.iter().map(|p| approx(p)).collect();
        let mut idx = PointIndex {
            pts,
            eps: eps.clone(),
            eps2,
            eps2f,
            approx: approx_pts,
            sorted: Vec::new(),
            keys: Vec::new(),
            grid: HashMap::new(),
            dim,
        };
        if dim == 1 {
            let mut order: Vec<usize> = (0..idx.pts.len()).collect();
            let key = |i: usize| idx.approx[i].0;
            order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then_with(|| idx.pts[a].x().cmp(idx.pts[b].x())));
            idx.keys = order.iter().map(|&i| key(i)).collect();
            idx.sorted = order;
        } else {
            for (i, p) in idx.pts.iter().enumerate() {
                let key = (cell(&p.0[0], eps), cell(&p.0[1], eps));
                idx.grid.entry(key).or_default().push(i);
            }
        }
        idx
    }

    pub fn point(&self, i: usize) -> &'a Point {
        self.pts[i]
    }

    fn neighbours(&self, p: &Point) -> impl Iterator<Item = usize> + '_ {
        let (cx, cy) = (cell(&p.0[0], &self.eps), cell(&p.0[1], &self.eps));
        (-1..=1)
            .flat_map(move |dx| (-1..=1).map(move |dy| (cx + dx, cy + dy)))
            .filter_map(|k| self.grid.get(&k))
            .flatten()
            .copied()
    }

    /// Index of the closest indexed point to `p` among those within eps;
    /// ties go to the lower index.
    pub fn nearest(&self, p: &Point) -> Option<usize> {
        let pa = approx(p);
        let slack = slack_f64(pa, self.eps2f);
        let cands: Vec<usize> = if self.dim == 1 {
            let x = p.x();
            let xf = pa.0;
            // rounding is monotone, so only equal keys need exact comparison
            let a = self.keys.partition_point(|k| *k < xf);
            let b = a + self.keys[a..].partition_point(|k| *k <= xf);
            let pos = a + self.sorted[a..b].partition_point(|&i| self.pts[i].x() < x);
            [pos.checked_sub(1), Some(pos)].into_iter().flatten().filter_map(|j| self.sorted.get(j).copied()).collect()
        } else {
            self.neighbours(p).collect()
        };
        let near: Vec<(usize, f64)> = cands
            .into_iter()
            .map(|i| (i, dist2_f64(pa, self.approx[i])))
            .filter(|&(_, d)| d <= self.eps2f + slack)
            .collect();
        let dmin = near.iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);
        let close: Vec<usize> = near.iter().filter(|&&(_, d)| d <= dmin + 2.0 * slack).map(|&(i, _)| i).collect();
        if let [i] = close.as_slice() {
            if near.iter().find(|t| t.0 == *i).is_some_and(|t| t.1 < self.eps2f - slack) {
                return Some(*i);
            }
        }
        let mut best: Option<(usize, Scalar)> = None;
        for i in close {
            let exact = p.squared_distance(self.pts[i]).expect("same dimension");
            if exact <= self.eps2 && best.as_ref().is_none_or(|(bi, b)| exact < *b || (exact == *b && i < *bi)) {
                best = Some((i, exact));
            }
        }
        best.map(|t| t.0)
    }

    pub fn any_within(&self, p: &Point) -> bool {
        if self.dim == 1 {
            return self.nearest(p).is_some();
        }
        let pa = approx(p);
        let slack = slack_f64(pa, self.eps2f);
        self.neighbours(p).any(|i| {
            let d = dist2_f64(pa, self.approx[i]);
            if d < self.eps2f - slack {
                true
            } else if d > self.eps2f + slack {
                false
            } else {
                p.squared_distance(self.pts[i]).expect("same dimension") <= self.eps2
            }
        })
    }
}

/// `d(p, q) <= tol`, with a floating-point shortcut away from the boundary.
pub(crate) fn within_tol(p: &Point, q: &Point, tol: &Scalar) -> bool {
    let t2 = tol.to_f64().powi(2);
    let pa = approx(p);
    let d = dist2_f64(pa, approx(q));
    let slack = slack_f64(pa, t2);
    if d < t2 - slack {
        true
    } else if d > t2 + slack {
        false
    } else {
        near(p, q, tol)
    }
}

/// Single-linkage components at radius eps, each sorted, listed in order
/// of their least point.
pub(crate) fn components(pts: &[Point], eps: &Scalar) -> Vec<Vec<Point>> {
    if pts.is_empty() {
        return Vec::new();
    }
    let mut sorted: Vec<Point> = pts.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted[0].dim() == 1 {
        let mut out: Vec<Vec<Point>> = Vec::new();
        for p in sorted {
            match out.last_mut() {
                Some(run) if p.x() - run.last().expect("nonempty").x() <= *eps => run.push(p),
                _ => out.push(vec![p]),
            }
        }
        return out;
    }
    let refs: Vec<&Point> = sorted.iter().collect();
    let index = PointIndex::new(refs, eps);
    let mut parent: Vec<usize> = (0..sorted.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..sorted.len() {
        let pa = index.approx[i];
        let slack = slack_f64(pa, index.eps2f);
        for j in index.neighbours(&sorted[i]) {
            if j <= i || find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            let d = dist2_f64(pa, index.approx[j]);
            let joined = if d < index.eps2f - slack {
                true
            } else if d > index.eps2f + slack {
                false
            } else {
                sorted[i].squared_distance(&sorted[j]).expect("dim") <= index.eps2
            };
            if joined {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: Vec<Vec<Point>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, p) in sorted.iter().enumerate() {
        let r = find(&mut parent, i);
        let g = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(p.clone());
    }
    groups
}

/// Splits a sorted component into tiles of diameter at most eps whose
/// representatives are members of the component. On the line the tiles
/// are runs `[s, s + eps]` with the last one anchored at the maximum, so
/// representatives are pairwise more than eps apart and include both
/// extremes. In the plane greedy balls of radius eps/2 are used.
pub(crate) fn tile(members: &[Point], eps: &Scalar) -> Vec<(Point, Vec<Point>)> {
    let mut out: Vec<(Point, Vec<Point>)> = Vec::new();
    if members.is_empty() {
        return out;
    }
    if members[0].dim() == 1 {
        for p in members {
            match out.last_mut() {
                Some((rep, list)) if p.x() - rep.x() <= *eps => list.push(p.clone()),
                _ => out.push((p.clone(), vec![p.clone()])),
            }
        }
        if out.len() > 1 {
            let (rep, list) = out.last_mut().expect("nonempty");
            *rep = list.last().expect("nonempty").clone();
        }
        return out;
    }
    let half = eps.half();
    let mut taken = vec![false; members.len()];
    for i in 0..members.len() {
        if taken[i] {
            continue;
        }
        let rep = members[i].clone();
        let mut list = Vec::new();
        for j in i..members.len() {
            if !taken[j] && near(&rep, &members[j], &half) {
                taken[j] = true;
                list.push(members[j].clone());
            }
        }
        out.push((rep, list));
    }
    out
}

/// Per-coordinate simplest rational in the hull of `members` widened by
/// `slack` on each side.
pub(crate) fn snap(lo: &Point, hi: &Point, slack: &Scalar) -> Point {
    let coords = lo
        .coords()
        .iter()
        .zip(hi.coords())
        .map(|(a, b)| simplest_rational(&Interval::closed(a - slack, b + slack).expect("lo <= hi")))
        .collect();
    Point(coords)
}

/// Clusters and ranges of a list of candidate points: components at
/// radius eps, tight ones snapped to a simplest rational, wide ones tiled.
pub(crate) fn clusterize(
    pts: &[Point],
    eps: &Scalar,
    slack: impl Fn(&[Point]) -> Scalar,
    provenance: Provenance,
) -> (Vec<Cluster>, Vec<Range>) {
    let mut clusters = Vec::new();
    let mut ranges = Vec::new();
    for comp in components(pts, eps) {
        let (lo, hi) = bounding_box(&comp).expect("nonempty component");
        let diameter = box_diameter(&lo, &hi);
        if diameter <= *eps {
            let s = Scalar::min(&slack(&comp), &eps.half().half());
            let representative = snap(&lo, &hi, &s);
            clusters.push(Cluster { representative, diameter, persistent_since_tail: 0, provenance });
        } else {
            for (representative, list) in tile(&comp, eps) {
                let (a, b) = bounding_box(&list).expect("nonempty tile");
                clusters.push(Cluster { representative, diameter: box_diameter(&a, &b), persistent_since_tail: 0, provenance });
            }
            ranges.push(Range { lo, hi });
        }
    }
    clusters.sort_by(|a, b| a.representative.cmp(&b.representative));
    (clusters, ranges)
}

/// Verdict from a cluster list; many isolated clusters with no wide
/// component carry no structure.
pub(crate) fn verdict_of(clusters: &[Cluster], ranges: &[Range]) -> Verdict {
    if clusters.is_empty() {
        Verdict::Empty
    } else if !ranges.is_empty() {
        Verdict::IntervalLike
    } else if clusters.len() > 256 {
        Verdict::Inconclusive
    } else {
        Verdict::FiniteSet
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Point {
        Point::line(Scalar::parse(s).unwrap())
    }

    #[test]
    fn line_components_and_tiles() {
        let eps = Scalar::parse("1/10").unwrap();
        let pts: Vec<Point> = ["0", "1/20", "1/10", "1", "21/20"].iter().map(|s| p(s)).collect();
        let comps = components(&pts, &eps);
        assert_eq!(comps.len(), 2);
        let wide: Vec<Point> = (0..=30).map(|k| p(&format!("{k}/100"))).collect();
        let tiles = tile(&wide, &eps);
        let reps: Vec<String> = tiles.iter().map(|(r, _)| r.to_string()).collect();
        assert_eq!(reps, ["0", "11/100", "3/10"]);
        for w in tiles.windows(2) {
            assert!(w[1].0.x() - w[0].0.x() > eps);
        }
    }

    #[test]
    fn snapping() {
        let eps = Scalar::parse("1/1000").unwrap();
        let pts = vec![p("3141001/1000"), p("31410002/10000"), p("3141003/1000")];
        let (c, r) = clusterize(&pts, &eps, |_| eps.half(), Provenance::Terms);
        assert!(r.is_empty());
        assert_eq!(c[0].representative, p("3141"));
    }

    #[test]
    fn plane_index() {
        let eps = Scalar::parse("1/10").unwrap();
        let pts = [Point::plane(Scalar::one(), Scalar::zero()), Point::plane(Scalar::zero(), Scalar::one())];
        let idx = PointIndex::new(pts.iter().collect(), &eps);
        let q = Point::plane(Scalar::parse("19/20").unwrap(), Scalar::parse("1/50").unwrap());
        assert_eq!(idx.nearest(&q), Some(0));
        assert!(!idx.any_within(&Point::plane(Scalar::zero(), Scalar::zero())));
        assert_eq!(components(&pts, &eps).len(), 2);
    }
}
