//! Exact scalars, extended reals, points with their metric, and interval
//! enclosures over the extended reals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ExactError;

/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar(BigRational);

// Cross-multiplication; `Ratio`'s own `cmp` goes through repeated floor
// division, which dominates sorting and heap work.
impl Ord for Scalar {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        let (a, b) = (&self.0, &o.0);
        if a.denom() == b.denom() {
            return a.numer().cmp(b.numer());
        }
        let (sa, sb) = (a.numer().sign(), b.numer().sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar(BigRational::from_integer(n))
    }

    pub fn new(numer: i64, denom: i64) -> Result<Self, ExactError> {
        Self::from_parts(BigInt::from(numer), BigInt::from(denom))
    }

    pub fn from_parts(numer: BigInt, denom: BigInt) -> Result<Self, ExactError> {
        if denom.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(numer, denom)))
    }

    /// `m / 2^k`.
    pub fn dyadic(m: BigInt, k: u32) -> Self {
        Scalar(BigRational::new(m, BigInt::one() << k as usize))
    }

    /// `1 / 10^k`.
    pub fn pow10_inv(k: u32) -> Self {
        Scalar(BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize)))
    }

    pub fn pow2_inv(k: u32) -> Self {
        Self::dyadic(BigInt::one(), k)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Scalar(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Scalar(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Scalar(&self.0 / &other.0))
    }

    /// Division by a nonzero machine integer.
    pub fn div_int(&self, d: i64) -> Self {
        assert!(d != 0, "div_int by zero");
        Scalar(&self.0 / BigRational::from_integer(BigInt::from(d)))
    }

    pub fn half(&self) -> Self {
        self.div_int(2)
    }

    pub fn mid(a: &Scalar, b: &Scalar) -> Self {
        (a + b).half()
    }

    pub fn powi(&self, k: i32) -> Result<Self, ExactError> {
        if k < 0 {
            return self.recip()?.powi(-k);
        }
        Ok(Scalar(num_traits::pow(self.0.clone(), k as usize)))
    }

    pub fn square(&self) -> Self {
        Scalar(&self.0 * &self.0)
    }

    pub fn min(a: &Scalar, b: &Scalar) -> Scalar {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Scalar, b: &Scalar) -> Scalar {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Largest dyadic `m/2^bits` that is `<= self`.
    pub fn round_down(&self, bits: u32) -> Self {
        Self::dyadic((self.numer() << bits as usize).div_floor(self.denom()), bits)
    }

    /// `round_down` of the midpoint of `a` and `b`, in integer arithmetic.
    pub fn mid_round_down(a: &Scalar, b: &Scalar, bits: u32) -> Self {
        let num = (a.numer() * b.denom() + b.numer() * a.denom()) << bits as usize;
        let den = (a.denom() * b.denom()) << 1usize;
        Self::dyadic(num.div_floor(&den), bits)
    }

    /// Smallest dyadic `m/2^bits` that is `>= self`.
    pub fn round_up(&self, bits: u32) -> Self {
        Self::dyadic((self.numer() << bits as usize).div_ceil(self.denom()), bits)
    }

    /// Nearest `f64`; monotone in the value, which prefilters rely on.
    pub fn to_f64(&self) -> f64 {
        if let Some(x) = self.0.to_f64() {
            return x;
        }
        let n = self.0.numer();
        let d = self.0.denom();
        // Shift both parts down to keep the quotient representable.
        let nb = n.bits() as i64;
        let db = d.bits() as i64;
        let shift = (nb.max(db) - 1000).max(0) as usize;
        let nf = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let df = (d >> shift).to_f64().unwrap_or(f64::NAN);
        nf / df
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Scalar)
    }

    /// floor(log2 |self|) for nonzero values.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let n = self.0.numer().abs();
        let d = self.0.denom();
        let mut e = n.bits() as i64 - d.bits() as i64;
        // 2^e <= n/d < 2^(e+1) after one correction step.
        let two_e = if e >= 0 {
            BigRational::from_integer(BigInt::one() << e as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        };
        if BigRational::new(n, d.clone()) < two_e {
            e -= 1;
        }
        Some(e)
    }

    /// Rational lower and upper bounds on `sqrt(self)` with gap at most
    /// `2^-bits`.
    pub fn sqrt_bounds(&self, bits: u32) -> Result<(Scalar, Scalar), ExactError> {
        if self.is_negative() {
            return Err(ExactError::NegativeSqrt);
        }
        // floor(sqrt(x * 4^bits)) / 2^bits
        let scale = BigInt::one() << (2 * bits as usize);
        let scaled = (&self.0 * BigRational::from_integer(scale)).floor().to_integer();
        let r = scaled.sqrt();
        let lo = Self::dyadic(r.clone(), bits);
        let hi = if &r * &r == scaled && lo.square() == *self {
            lo.clone()
        } else {
            Self::dyadic(r + 1, bits)
        };
        Ok((lo, hi))
    }

    pub fn parse(src: &str) -> Result<Self, ExactError> {
        let s = src.trim();
        let bad = || ExactError::Parse(src.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return Self::from_parts(p, q).map_err(|_| bad());
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
                (&s[..i], e)
            }
            None => (s, 0),
        };
        let (neg, body) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        if neg {
            n = -n;
        }
        let shift = exp - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let r = if shift >= 0 {
            BigRational::from_integer(n * num_traits::pow(ten, shift as usize))
        } else {
            BigRational::new(n, num_traits::pow(ten, (-shift) as usize))
        };
        Ok(Scalar(r))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::parse(s)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$m(rhs.0))
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected rational, got {other}"))),
        };
        Scalar::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The four exact field operations; division by zero is an error.
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, ExactError> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
    }
}

/// A rational or one of the two infinities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtendedReal {
    NegInf,
    Finite(Scalar),
    PosInf,
}

impl ExtendedReal {
    pub fn finite(x: Scalar) -> Self {
        ExtendedReal::Finite(x)
    }

    pub fn zero() -> Self {
        ExtendedReal::Finite(Scalar::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Scalar> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            ExtendedReal::NegInf => -1,
            ExtendedReal::PosInf => 1,
            ExtendedReal::Finite(x) => x.signum(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExtendedReal::NegInf => ExtendedReal::PosInf,
            ExtendedReal::PosInf => ExtendedReal::NegInf,
            ExtendedReal::Finite(x) => ExtendedReal::Finite(-x),
        }
    }

    fn inf_of_sign(s: i32) -> Self {
        if s > 0 {
            ExtendedReal::PosInf
        } else {
            ExtendedReal::NegInf
        }
    }

    pub fn add(&self, other: &ExtendedReal) -> Result<Self, ExactError> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => Err(ExactError::Indeterminate("inf - inf")),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }

    pub fn sub(&self, other: &ExtendedReal) -> Result<Self, ExactError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExtendedReal) -> Result<Self, ExactError> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a * b)),
            _ => {
                let s = self.signum() * other.signum();
                if s == 0 {
                    Err(ExactError::Indeterminate("0 * inf"))
                } else {
                    Ok(Self::inf_of_sign(s))
                }
            }
        }
    }

    pub fn min<'a>(a: &'a ExtendedReal, b: &'a ExtendedReal) -> &'a ExtendedReal {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn max<'a>(a: &'a ExtendedReal, b: &'a ExtendedReal) -> &'a ExtendedReal {
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn parse(src: &str) -> Result<Self, ExactError> {
        match src.trim() {
            "inf" | "+inf" => Ok(ExtendedReal::PosInf),
            "-inf" => Ok(ExtendedReal::NegInf),
            s => Scalar::parse(s).map(ExtendedReal::Finite),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::PosInf => f64::INFINITY,
            ExtendedReal::Finite(x) => x.to_f64(),
        }
    }
}

impl From<Scalar> for ExtendedReal {
    fn from(x: Scalar) -> Self {
        ExtendedReal::Finite(x)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => write!(f, "-inf"),
            ExtendedReal::PosInf => write!(f, "inf"),
            ExtendedReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ExtendedReal::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A point of the line or the plane.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Result<Self, ExactError> {
        if coords.is_empty() || coords.len() > 2 {
            return Err(ExactError::Dimension(coords.len()));
        }
        Ok(Point(coords))
    }

    pub fn line(x: Scalar) -> Self {
        Point(vec![x])
    }

    pub fn plane(x: Scalar, y: Scalar) -> Self {
        Point(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn x(&self) -> &Scalar {
        &self.0[0]
    }

    fn check_dims(&self, other: &Point) -> Result<(), ExactError> {
        if self.dim() != other.dim() {
            Err(ExactError::DimensionMismatch(self.dim(), other.dim()))
        } else {
            Ok(())
        }
    }

    pub fn squared_distance(&self, other: &Point) -> Result<Scalar, ExactError> {
        self.check_dims(other)?;
        Ok(self.0.iter().zip(&other.0).fold(Scalar::zero(), |acc, (a, b)| acc + (a - b).square()))
    }

    /// Largest coordinate difference.
    pub fn chebyshev(&self, other: &Point) -> Result<Scalar, ExactError> {
        self.check_dims(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).max().unwrap_or_default())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", parts.join(", "))
        }
    }
}

/// Result of [`distance`]: exact when the points are on the line, otherwise
/// the exact square together with rational bounds on the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distance {
    pub squared: Scalar,
    pub lower: Scalar,
    pub upper: Scalar,
}

impl Distance {
    pub fn exact(&self) -> Option<&Scalar> {
        (self.lower == self.upper).then_some(&self.lower)
    }
}

const SQRT_BITS: u32 = 128;

pub fn distance(p: &Point, q: &Point) -> Result<Distance, ExactError> {
    let squared = p.squared_distance(q)?;
    if p.dim() == 1 {
        let d = (p.x() - q.x()).abs();
        return Ok(Distance { squared, lower: d.clone(), upper: d });
    }
    let (lower, upper) = squared.sqrt_bounds(SQRT_BITS)?;
    Ok(Distance { squared, lower, upper })
}

/// `d(p, q) <= eps`, decided on squared quantities.
pub fn within(p: &Point, q: &Point, eps: &Scalar) -> Result<bool, ExactError> {
    Ok(p.squared_distance(q)? <= eps.square())
}

/// Closed interval `[lo, hi]` over the extended reals.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: ExtendedReal,
    pub hi: ExtendedReal,
}

impl Enclosure {
    pub fn new(lo: ExtendedReal, hi: ExtendedReal) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::InvertedEnclosure(lo.to_string(), hi.to_string()));
        }
        Ok(Enclosure { lo, hi })
    }

    pub fn finite(lo: Scalar, hi: Scalar) -> Self {
        debug_assert!(lo <= hi);
        Enclosure { lo: lo.into(), hi: hi.into() }
    }

    pub fn point(x: Scalar) -> Self {
        Enclosure { lo: x.clone().into(), hi: x.into() }
    }

    pub fn whole() -> Self {
        Enclosure { lo: ExtendedReal::NegInf, hi: ExtendedReal::PosInf }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> Option<Scalar> {
        match (&self.lo, &self.hi) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => Some(b - a),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let x = ExtendedReal::Finite(x.clone());
        self.lo <= x && x <= self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Scalar::zero())
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: ExtendedReal::min(&self.lo, &other.lo).clone(),
            hi: ExtendedReal::max(&self.hi, &other.hi).clone(),
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &Enclosure) -> Result<Enclosure, ExactError> {
        Ok(Enclosure { lo: self.lo.add(&other.lo)?, hi: self.hi.add(&other.hi)? })
    }

    pub fn sub(&self, other: &Enclosure) -> Result<Enclosure, ExactError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Enclosure) -> Result<Enclosure, ExactError> {
        let corners = [
            bound_product(&self.lo, &other.lo),
            bound_product(&self.lo, &other.hi),
            bound_product(&self.hi, &other.lo),
            bound_product(&self.hi, &other.hi),
        ];
        let lo = corners.iter().min().cloned().unwrap_or(ExtendedReal::NegInf);
        let hi = corners.iter().max().cloned().unwrap_or(ExtendedReal::PosInf);
        Ok(Enclosure { lo, hi })
    }

    pub fn arith(&self, other: &Enclosure, op: ArithOp) -> Result<Enclosure, ExactError> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
            ArithOp::Div => self.div(other),
        }
    }

    /// Enclosure of `1/y` for `y` in self. When zero is inside, the result
    /// is unbounded on the side(s) reaching zero.
    pub fn recip(&self) -> Result<Enclosure, ExactError> {
        use ExtendedReal::*;
        let zero = ExtendedReal::zero();
        if self.lo == zero && self.hi == zero {
            return Err(ExactError::DivisionByZero);
        }
        let inv = |e: &ExtendedReal| -> ExtendedReal {
            match e {
                Finite(x) if !x.is_zero() => Finite(x.recip().expect("nonzero")),
                _ => ExtendedReal::zero(),
            }
        };
        if self.lo > zero || self.hi < zero {
            // Same sign throughout.
            return Ok(Enclosure { lo: inv(&self.hi), hi: inv(&self.lo) });
        }
        if self.lo == zero {
            return Ok(Enclosure { lo: inv(&self.hi), hi: PosInf });
        }
        if self.hi == zero {
            return Ok(Enclosure { lo: NegInf, hi: inv(&self.lo) });
        }
        Ok(Enclosure::whole())
    }

    pub fn div(&self, other: &Enclosure) -> Result<Enclosure, ExactError> {
        self.mul(&other.recip()?)
    }

    pub fn abs(&self) -> Enclosure {
        let zero = ExtendedReal::zero();
        if self.lo >= zero {
            self.clone()
        } else if self.hi <= zero {
            self.neg()
        } else {
            let m = ExtendedReal::max(&self.hi, &self.lo.neg()).clone();
            Enclosure { lo: zero, hi: m }
        }
    }

    /// Range of `y^k` over the enclosure, `k >= 0`.
    pub fn powi(&self, k: u32) -> Enclosure {
        if k == 0 {
            return Enclosure::point(Scalar::one());
        }
        let p = |e: &ExtendedReal| -> ExtendedReal {
            match e {
                ExtendedReal::Finite(x) => ExtendedReal::Finite(Scalar(num_traits::pow(x.0.clone(), k as usize))),
                inf => {
                    if k % 2 == 0 {
                        ExtendedReal::PosInf
                    } else {
                        inf.clone()
                    }
                }
            }
        };
        if k % 2 == 1 {
            return Enclosure { lo: p(&self.lo), hi: p(&self.hi) };
        }
        let a = self.abs();
        Enclosure { lo: p(&a.lo), hi: p(&a.hi) }
    }

    pub fn midpoint(&self) -> Option<Scalar> {
        match (&self.lo, &self.hi) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => Some(Scalar::mid(a, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Product of two enclosure bounds with `0 * inf = 0`, which is the right
/// convention for bounds of sets of reals.
fn bound_product(a: &ExtendedReal, b: &ExtendedReal) -> ExtendedReal {
    if a.signum() == 0 || b.signum() == 0 {
        return ExtendedReal::zero();
    }
    a.mul(b).expect("nonzero product is determinate")
}

/// Enclosure arithmetic for `+`, `-`, `*`.
pub fn enclosure_arith(a: &Enclosure, b: &Enclosure, op: ArithOp) -> Result<Enclosure, ExactError> {
    match op {
        ArithOp::Div => Err(ExactError::Unsupported("enclosure division by arith table")),
        _ => a.arith(b, op),
    }
}

/// Nearest-integer rounding, ties toward +inf.
pub fn round_nearest(x: &Scalar) -> BigInt {
    (x + Scalar::new(1, 2).expect("const")).floor()
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(s("6/4").to_string(), "3/2");
        assert_eq!(s("-0.25").to_string(), "-1/4");
        assert_eq!(s("1e-3").to_string(), "1/1000");
        assert_eq!(s("3140").to_string(), "3140");
        assert_eq!(s("2/-4").to_string(), "-1/2");
        assert!(Scalar::parse("1/0").is_err());
        assert!(Scalar::parse("abc").is_err());
        assert!(Scalar::parse("").is_err());
    }

    #[test]
    fn arith_examples() {
        assert_eq!(scalar_arith(&s("1/3"), &s("1/6"), ArithOp::Add).unwrap(), s("1/2"));
        assert_eq!(scalar_arith(&s("22/7"), &s("7/22"), ArithOp::Mul).unwrap(), Scalar::one());
        assert!(scalar_arith(&s("1/3"), &Scalar::zero(), ArithOp::Div).is_err());
    }

    #[test]
    fn distance_examples() {
        let d = distance(&Point::line(s("3")), &Point::line(s("3"))).unwrap();
        assert_eq!(d.exact(), Some(&Scalar::zero()));
        let d = distance(&Point::line(s("3140")), &Point::line(s("3139"))).unwrap();
        assert_eq!(d.exact(), Some(&Scalar::one()));
        let p = Point::plane(Scalar::one(), Scalar::zero());
        let q = Point::plane(Scalar::zero(), Scalar::one());
        let d = distance(&p, &q).unwrap();
        assert_eq!(d.squared, s("2"));
        assert!(d.lower.square() <= s("2") && s("2") <= d.upper.square());
        assert!(distance(&p, &Point::line(Scalar::one())).is_err());
        let d = distance(&Point::plane(s("3"), s("0")), &Point::plane(s("0"), s("4"))).unwrap();
        assert_eq!(d.exact(), Some(&s("5")));
    }

    #[test]
    fn extended_real_rules() {
        use ExtendedReal::*;
        assert!(PosInf.add(&NegInf).is_err());
        assert!(ExtendedReal::zero().mul(&PosInf).is_err());
        assert_eq!(Finite(s("-2")).mul(&PosInf).unwrap(), NegInf);
        assert!(NegInf < Finite(s("-1000000")) && Finite(s("1000000")) < PosInf);
    }

    #[test]
    fn enclosure_examples() {
        let e = |a: &str, b: &str| Enclosure::finite(s(a), s(b));
        assert_eq!(enclosure_arith(&e("-1", "2"), &e("3", "4"), ArithOp::Mul).unwrap(), e("-4", "8"));
        assert_eq!(enclosure_arith(&e("0", "1"), &e("0", "0"), ArithOp::Add).unwrap(), e("0", "1"));
        assert_eq!(enclosure_arith(&e("1", "2"), &e("1", "2"), ArithOp::Sub).unwrap(), e("-1", "1"));
        let r = e("0", "2").recip().unwrap();
        assert_eq!(r.lo, ExtendedReal::Finite(s("1/2")));
        assert_eq!(r.hi, ExtendedReal::PosInf);
        assert_eq!(e("-1", "2").powi(2), e("0", "4"));
        assert_eq!(Enclosure::whole().add(&Enclosure::whole()).unwrap(), Enclosure::whole());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let (lo, hi) = s("2").sqrt_bounds(64).unwrap();
        assert!(lo.square() < s("2") && s("2") < hi.square());
        assert!(&hi - &lo <= Scalar::pow2_inv(64));
        let (lo, hi) = s("9/4").sqrt_bounds(10).unwrap();
        assert_eq!(lo, s("3/2"));
        assert_eq!(hi, s("3/2"));
    }

    #[test]
    fn rounding_and_logs() {
        assert_eq!(s("1/3").round_down(2), s("1/4"));
        assert_eq!(s("1/3").round_up(2), s("1/2"));
        assert_eq!(s("8").log2_floor(), Some(3));
        assert_eq!(s("7").log2_floor(), Some(2));
        assert_eq!(s("1/8").log2_floor(), Some(-3));
        assert_eq!(s("3/16").log2_floor(), Some(-3));
    }
}
