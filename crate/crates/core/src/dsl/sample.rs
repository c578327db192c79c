use num_bigint::BigInt;
use num_traits::One;

use crate::dsl::rational::smallest_denominator;
use crate::dsl::SamplePoint;
use crate::exact::{ExtendedReal, Scalar};
use crate::sets::Interval;

const WINDOW: i64 = 1000;

/// Deterministic sample of `n` points of `iv`: `ceil(mix * n)` rationals
/// (low-denominator points first, then a midpoint grid) and the rest
/// irrational-tagged points `lo + w * frac(k sqrt 2)` taken in mirrored
/// pairs. Unbounded sides are clipped to a window of width 1000.
pub fn sample_points(iv: &Interval, n: usize, mix: &Scalar, seed: u64) -> Vec<SamplePoint> {
    let (lo, hi) = clip(iv);
    if lo == hi {
        return vec![SamplePoint::rational(lo)];
    }
    let w = &hi - &lo;
    let n_scalar = Scalar::from_int(n as i64);
    let wanted = (mix * &n_scalar).ceil();
    let n_rat = usize::try_from(wanted).unwrap_or(0).min(n);
    let n_irr = n - n_rat;

    let mut out: Vec<SamplePoint> = Vec::with_capacity(n);
    let n_farey = n_rat.div_ceil(4);
    out.extend(farey_points(iv, &lo, &hi, n_farey).into_iter().map(SamplePoint::rational));
    let n_grid = n_rat.saturating_sub(out.len());
    for j in 1..=n_grid {
        let t = Scalar::new(2 * j as i64 - 1, 2 * n_grid as i64).expect("grid denominator");
        out.push(SamplePoint::rational(&lo + &(&w * &t)));
    }
    let mut k = seed + 1;
    while out.len() < n_rat + n_irr {
        let kk = BigInt::from(k);
        // floor(k sqrt 2) = isqrt(2 k^2)
        let m = Scalar::from_bigint((&kk * &kk * 2u32).sqrt());
        let ks = Scalar::from_bigint(kk);
        out.push(SamplePoint::sqrt2_affine(&lo - &(&w * &m), &w * &ks));
        if out.len() < n_rat + n_irr {
            out.push(SamplePoint::sqrt2_affine(&lo + &(&w * &(m + Scalar::one())), -(&w * &ks)));
        }
        k += 1;
    }
    out.sort_by(|a, b| a.value.cmp(&b.value));
    out.dedup_by(|a, b| a.value == b.value);
    out
}

fn clip(iv: &Interval) -> (Scalar, Scalar) {
    let win = Scalar::from_int(WINDOW);
    match (&iv.lo, &iv.hi) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => (a.clone(), b.clone()),
        (ExtendedReal::Finite(a), _) => (a.clone(), a + &win),
        (_, ExtendedReal::Finite(b)) => (b - &win, b.clone()),
        _ => (-win.clone(), win),
    }
}

/// Up to `count` rationals of `iv` in order of increasing denominator.
fn farey_points(iv: &Interval, lo: &Scalar, hi: &Scalar, count: usize) -> Vec<Scalar> {
    let mut out = Vec::new();
    if count == 0 {
        return out;
    }
    let clipped = Interval::closed(lo.clone(), hi.clone()).expect("lo < hi");
    let start = smallest_denominator(&clipped);
    let mut q = start.clone();
    let stop = &start + BigInt::from(4096);
    while out.len() < count && q < stop {
        let qs = Scalar::from_bigint(q.clone());
        let mut p = (lo * &qs).ceil();
        let last = (hi * &qs).floor();
        while p <= last && out.len() < count {
            if num_integer::Integer::gcd(&p, &q).is_one() {
                let x = Scalar::from_parts(p.clone(), q.clone()).expect("q >= 1");
                if iv.contains(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
            p += 1;
        }
        q += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    #[test]
    fn counts() {
        let unit = Interval::closed(q("0"), q("1")).unwrap();
        let pts = sample_points(&unit, 4, &q("1"), 0);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| p.is_rational() && unit.contains(&p.value)));
        let pts = sample_points(&unit, 4, &q("1/2"), 0);
        assert_eq!(pts.iter().filter(|p| p.is_rational()).count(), 2);
        assert_eq!(pts.iter().filter(|p| !p.is_rational()).count(), 2);
    }

    #[test]
    fn open_and_unbounded() {
        let iv = Interval::open(q("0"), q("1/1000000")).unwrap();
        let pts = sample_points(&iv, 64, &q("1/2"), 3);
        assert_eq!(pts.len(), 64);
        assert!(pts.iter().all(|p| iv.contains(&p.value)));
        let iv = Interval::new(q("2").into(), true, ExtendedReal::PosInf, true).unwrap();
        let pts = sample_points(&iv, 10, &q("1/2"), 0);
        assert!(pts.iter().all(|p| iv.contains(&p.value)));
    }

    #[test]
    fn deterministic() {
        let iv = Interval::open(q("-3"), q("5")).unwrap();
        assert_eq!(sample_points(&iv, 33, &q("1/3"), 7), sample_points(&iv, 33, &q("1/3"), 7));
    }
}
