//! Simplest rationals in intervals by Stern-Brocot descent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{ExtendedReal, Scalar};
use crate::sets::Interval;

/// The rational with the least denominator in `iv` (least absolute value
/// among those). The interval must be nonempty.
pub fn simplest_rational(iv: &Interval) -> Scalar {
    if iv.is_degenerate() {
        return iv.lo.as_finite().expect("degenerate intervals are finite").clone();
    }
    if iv.contains(&Scalar::zero()) {
        return Scalar::zero();
    }
    let zero = ExtendedReal::zero();
    if iv.hi <= zero {
        let m = Interval { lo: iv.hi.neg(), lo_open: iv.hi_open, hi: iv.lo.neg(), hi_open: iv.lo_open };
        return -simplest_positive(&m);
    }
    simplest_positive(iv)
}

/// Least `q` such that some `p/q` lies in `iv`.
pub fn smallest_denominator(iv: &Interval) -> BigInt {
    simplest_rational(iv).denom().clone()
}

/// Descent for an interval within `[0, inf]` that excludes 0. Works on
/// numerator/denominator pairs: every intermediate fraction stays reduced
/// and the answer is rebuilt from convergents, so no gcds are needed.
fn simplest_positive(iv: &Interval) -> Scalar {
    let lo = iv.lo.as_finite().expect("positive interval has finite lower end");
    let (mut ln, mut ld) = (lo.numer().clone(), lo.denom().clone());
    let mut lo_open = iv.lo_open;
    let mut hi = iv.hi.as_finite().map(|h| (h.numer().clone(), h.denom().clone()));
    let mut hi_open = iv.hi_open;
    // current value is (p1 y + p0) / (q1 y + q0) in the remaining unknown y
    let (mut p0, mut p1, mut q0, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    loop {
        let (n, rem) = ln.div_mod_floor(&ld);
        let c = if lo_open || !rem.is_zero() { &n + 1 } else { n.clone() };
        let fits = match &hi {
            None => true,
            Some((hn, hd)) => {
                let ch = &c * hd;
                ch < *hn || (ch == *hn && !hi_open)
            }
        };
        if fits {
            let (p, q) = (&p1 * &c + &p0, &q1 * &c + &q0);
            return Scalar::from_ratio(BigRational::new_raw(p, q));
        }
        let (hn, hd) = hi.take().expect("finite when no integer fits");
        // x = n + 1/y, y in (1/(hi-n), 1/(lo-n))
        let new_lo_den = &hn - &n * &hd;
        hi = if rem.is_zero() { None } else { Some((ld, rem)) };
        ln = hd;
        ld = new_lo_den;
        std::mem::swap(&mut lo_open, &mut hi_open);
        let p = &p1 * &n + &p0;
        p0 = std::mem::replace(&mut p1, p);
        let q = &q1 * &n + &q0;
        q0 = std::mem::replace(&mut q1, q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    fn open(a: &str, b: &str) -> Interval {
        Interval::open(q(a), q(b)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(smallest_denominator(&open("3/10", "7/20")), BigInt::from(3));
        assert_eq!(simplest_rational(&open("3/10", "7/20")), q("1/3"));
        assert_eq!(smallest_denominator(&open("0", "1")), BigInt::from(2));
        assert_eq!(smallest_denominator(&open("249/100", "251/100")), BigInt::from(2));
        assert_eq!(simplest_rational(&open("-7/20", "-3/10")), q("-1/3"));
        assert_eq!(simplest_rational(&open("-1", "1")), q("0"));
        assert_eq!(simplest_rational(&Interval::closed(q("1/2"), q("1")).unwrap()), q("1"));
        assert_eq!(simplest_rational(&open("1/2", "1")), q("2/3"));
        assert_eq!(simplest_rational(&Interval::new(q("0").into(), true, q("1/3").into(), false).unwrap()), q("1/3"));
        assert_eq!(simplest_rational(&Interval::new(q("5/2").into(), true, ExtendedReal::PosInf, true).unwrap()), q("3"));
    }

    #[test]
    fn brute_force() {
        for a in 0..40i64 {
            for b in a + 1..42 {
                for (lo_open, hi_open) in [(false, false), (true, false), (false, true), (true, true)] {
                    let iv = Interval::new(Scalar::new(a, 13).unwrap().into(), lo_open, Scalar::new(b, 13).unwrap().into(), hi_open).unwrap();
                    let want = (1..=60i64)
                        .find(|&d| (0..=4 * d).any(|n| iv.contains(&Scalar::new(n, d).unwrap())))
                        .unwrap();
                    assert_eq!(smallest_denominator(&iv), BigInt::from(want), "{iv:?}");
                }
            }
        }
    }
}
