//! Certified sine and cosine of exact rationals in fixed-point arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::exact::Scalar;

const PI_BITS: u32 = 4096;
const GUARD: u32 = 64;

/// floor(pi * 2^PI_BITS), exact to within 1 unit.
static PI_FIXED: Lazy<BigInt> = Lazy::new(|| {
    let p = PI_BITS + GUARD;
    let one = BigInt::one() << p as usize;
    let atan_inv = |n: i64| -> BigInt {
        let n = BigInt::from(n);
        let n2 = &n * &n;
        let mut term = &one / &n;
        let mut sum = BigInt::zero();
        let mut k: i64 = 0;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &n2;
            k += 1;
        }
        sum
    };
    let pi = atan_inv(5) * 16 - atan_inv(239) * 4;
    pi >> GUARD as usize
});

/// Rational bounds `lo <= pi <= hi` with `hi - lo = 2^-bits`, `bits <= 4000`.
pub fn pi_bounds(bits: u32) -> (Scalar, Scalar) {
    let bits = bits.min(PI_BITS - 64);
    let shifted = &*PI_FIXED >> (PI_BITS - bits) as usize;
    // truncation error of the cached value is far below one unit here
    let lo = Scalar::dyadic(shifted.clone(), bits);
    let hi = Scalar::dyadic(shifted + 1, bits);
    (lo, hi)
}

/// pi/2 scaled by 2^p, floored.
fn half_pi_fixed(p: u32) -> BigInt {
    &*PI_FIXED >> (PI_BITS - p + 1) as usize
}

#[derive(Clone, Copy)]
enum Kind {
    Sin,
    Cos,
}

/// Rational enclosure `[lo, hi]` of `sin(x)` of width at most about
/// `2^-120`, clamped to `[-1, 1]`.
pub fn sin_enclosure(x: &Scalar) -> (Scalar, Scalar) {
    eval(x, Kind::Sin)
}

pub fn cos_enclosure(x: &Scalar) -> (Scalar, Scalar) {
    eval(x, Kind::Cos)
}

fn eval(x: &Scalar, kind: Kind) -> (Scalar, Scalar) {
    if x.is_zero() {
        let v = match kind {
            Kind::Sin => Scalar::zero(),
            Kind::Cos => Scalar::one(),
        };
        return (v.clone(), v);
    }
    let mag = x.log2_floor().unwrap_or(0).max(0) as u32;
    if mag > PI_BITS - 512 {
        return (Scalar::from_int(-1), Scalar::one());
    }
    let p: u32 = 128 + mag;
    // X = floor(x * 2^p), |X - x 2^p| < 1
    let xs = x.round_down(p);
    let xi = xs.numer() * (BigInt::one() << p as usize) / xs.denom();
    let h = half_pi_fixed(p);
    // k = nearest integer to X / H
    let num: BigInt = &xi * 2 + &h;
    let k = num.div_floor(&(&h * 2));
    let r = &xi - &k * &h;
    let quadrant = (k.mod_floor(&BigInt::from(4))).try_into().unwrap_or(0u32);
    let quadrant = match kind {
        Kind::Sin => quadrant,
        Kind::Cos => (quadrant + 1) % 4,
    };
    let (val, terms) = match quadrant % 2 {
        0 => taylor_sin(&r, p),
        _ => taylor_cos(&r, p),
    };
    let val = if quadrant >= 2 { -val } else { val };
    // error of r: |k| units from the pi/2 truncation, 1 from X, 1 from H
    let err = k.abs() + BigInt::from(4 + 4 * terms as i64);
    let lo = Scalar::dyadic(&val - &err, p);
    let hi = Scalar::dyadic(&val + &err, p);
    let m1 = Scalar::from_int(-1);
    let one = Scalar::one();
    (Scalar::max(&lo, &m1), Scalar::min(&hi, &one))
}

/// Fixed-point sine series for |r| <= 1 (units 2^-p); returns value and op count.
fn taylor_sin(r: &BigInt, p: u32) -> (BigInt, usize) {
    let r2 = (r * r) >> p as usize;
    let mut term = r.clone();
    let mut sum = BigInt::zero();
    let mut j: i64 = 0;
    let mut ops = 0;
    while !term.is_zero() {
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = ((&term * &r2) >> p as usize) / BigInt::from((2 * j + 2) * (2 * j + 3));
        j += 1;
        ops += 1;
    }
    (sum, ops)
}

fn taylor_cos(r: &BigInt, p: u32) -> (BigInt, usize) {
    let r2 = (r * r) >> p as usize;
    let mut term = BigInt::one() << p as usize;
    let mut sum = BigInt::zero();
    let mut j: i64 = 0;
    let mut ops = 0;
    while !term.is_zero() {
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = ((&term * &r2) >> p as usize) / BigInt::from((2 * j + 1) * (2 * j + 2));
        j += 1;
        ops += 1;
    }
    (sum, ops)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Hit {
    No,
    Maybe,
    Yes,
}

/// Whether some `t = pi * (offset + 2m)` lies in `[a, b]`, where
/// `offset` is a multiple of 1/2. Used to locate extrema of sin/cos.
pub fn crit_hits(a: &Scalar, b: &Scalar, offset: &Scalar) -> Hit {
    let mag = Scalar::max(&a.abs(), &b.abs()).log2_floor().unwrap_or(0).max(0) as u32;
    let (plo, phi) = pi_bounds(160 + mag);
    let two = Scalar::from_int(2);
    // smallest m with pi_hi (offset + 2m) >= a, using the lower multiplier
    let start: BigInt = (a.checked_div(&plo).expect("pi > 0") - offset).checked_div(&two).expect("two").floor() - 1;
    let mut m = start;
    let mut best = Hit::No;
    for _ in 0..8 {
        let c = offset + &(Scalar::from_bigint(m.clone()) * &two);
        let (t1, t2) = (&c * &plo, &c * &phi);
        let (tlo, thi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        if &tlo > b {
            break;
        }
        if &thi >= a {
            if &tlo >= a && &thi <= b {
                return Hit::Yes;
            }
            best = Hit::Maybe;
        }
        m += 1;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    #[test]
    fn pi_digits() {
        let (lo, hi) = pi_bounds(64);
        assert!(lo < hi);
        assert!(lo.to_f64() - std::f64::consts::PI < 1e-15);
        assert!(q("314159265358979/100000000000000") < lo);
        assert!(hi < q("314159265358980/100000000000000"));
    }

    #[test]
    fn values_bracket_f64() {
        for s in ["1", "1/2", "-3", "100", "3/2", "22/7", "1000000", "-1/1000"] {
            let x = q(s);
            let f = x.to_f64();
            let (lo, hi) = sin_enclosure(&x);
            assert!(lo <= hi);
            assert!(&hi - &lo <= Scalar::pow2_inv(64), "{s}");
            assert!((lo.to_f64() - f.sin()).abs() < 1e-9, "{s}");
            let (_, hi) = cos_enclosure(&x);
            assert!((hi.to_f64() - f.cos()).abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn exact_identities() {
        let (lo, hi) = sin_enclosure(&Scalar::zero());
        assert_eq!((lo, hi), (Scalar::zero(), Scalar::zero()));
        let (lo, hi) = cos_enclosure(&Scalar::zero());
        assert_eq!((lo, hi), (Scalar::one(), Scalar::one()));
        // sin at a rational just below pi/2 stays below 1
        let (_, hi) = sin_enclosure(&q("3/2"));
        assert!(hi < Scalar::one());
    }

    #[test]
    fn critical_points() {
        let half = q("1/2");
        assert_eq!(crit_hits(&q("0"), &q("2"), &half), Hit::Yes);
        assert_eq!(crit_hits(&q("2"), &q("7"), &half), Hit::No);
        assert_eq!(crit_hits(&q("7"), &q("8"), &half), Hit::Yes);
        assert_eq!(crit_hits(&q("-5"), &q("-4"), &half), Hit::Yes);
    }
}
