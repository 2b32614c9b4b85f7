//! Arithmetic backends.
//!
//! Every construction in this crate is generic over [`Scalar`], which is
//! implemented for exact big rationals and for IEEE doubles. The nearest
//! integer operator `⌈a⌉` resolves exact half-integer ties downward; in
//! floating mode values within the tie guard of a half-integer are flagged
//! as boundary-ambiguous instead of being trusted.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Arithmetic mode selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arith {
    Exact,
    Float,
}

impl FromStr for Arith {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "rational" => Ok(Arith::Exact),
            "float" | "float64" => Ok(Arith::Float),
            other => Err(Error::Parse(format!("unknown arithmetic mode {other:?}"))),
        }
    }
}

/// Distance to a half-integer below which a floating rounding is reported
/// as ambiguous.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TieGuard(pub f64);

pub const DEFAULT_TIE_GUARD: f64 = 1e-12;

impl Default for TieGuard {
    fn default() -> Self {
        TieGuard(DEFAULT_TIE_GUARD)
    }
}

/// A value together with a flag telling whether any rounding that produced
/// it sat on a floating tie.
#[derive(Clone, Debug, PartialEq)]
pub struct Rounded<T> {
    pub value: T,
    pub ambiguous: bool,
}

impl<T> Rounded<T> {
    pub fn exact(value: T) -> Self {
        Rounded {
            value,
            ambiguous: false,
        }
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn is_finite(&self) -> bool;
    fn floor(&self) -> Self;
    fn ceil(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Integer value of an integral scalar.
    fn to_bigint(&self) -> Option<BigInt>;
    /// True when the value sits within `guard` of a half-integer and the
    /// backend cannot resolve the tie reliably.
    fn near_half_tie(&self, guard: TieGuard) -> bool;
    fn parse(s: &str) -> Result<Self>;
    fn to_json(&self) -> Value;

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Fractional part of `c·self` in `[0, 1)`.
    fn mul_int_frac01(&self, c: &BigInt) -> Self {
        frac01(&(Self::from_bigint(c) * self.clone()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse(s),
            Value::Number(n) => Self::parse(&n.to_string()),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_bigint(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn floor(&self) -> Self {
        Rational::floor(self)
    }
    fn ceil(&self) -> Self {
        Rational::ceil(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer())
    }
    fn near_half_tie(&self, _guard: TieGuard) -> bool {
        false
    }
    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_bigint(n: &BigInt) -> Self {
        ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY)
    }
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn ceil(&self) -> Self {
        f64::ceil(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_bigint(&self) -> Option<BigInt> {
        if self.fract() == 0.0 {
            BigInt::from_f64(*self)
        } else {
            None
        }
    }
    fn near_half_tie(&self, guard: TieGuard) -> bool {
        let frac = *self - f64::floor(*self);
        (frac - 0.5).abs() < guard.0
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let q: f64 = q.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            return Ok(p / q);
        }
        s.parse().map_err(|_| Error::Parse(s.to_string()))
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    // A double is a dyadic rational, so the product is reduced mod 1 exactly
    // and only the final result is rounded.
    fn mul_int_frac01(&self, c: &BigInt) -> Self {
        match BigRational::from_float(*self) {
            Some(q) => {
                let p = q * BigRational::from_integer(c.clone());
                ToPrimitive::to_f64(&(p.clone() - p.floor())).unwrap_or(f64::NAN).rem_euclid(1.0)
            }
            None => f64::NAN,
        }
    }
}

/// Parses `p/q`, integers, decimals and decimal exponents into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        q = -q;
    }
    Ok(q)
}

/// `⌈a⌉`: the nearest integer, with exact ties resolved to the smaller one.
pub fn nearest_int<S: Scalar>(a: &S) -> S {
    (a.clone() - S::half()).ceil()
}

/// `a − ⌈a⌉`, which always lies in `(−1/2, 1/2]`.
pub fn residual<S: Scalar>(a: &S) -> S {
    a.clone() - nearest_int(a)
}

/// `‖a‖`: the distance from `a` to the nearest integer.
pub fn frac_norm<S: Scalar>(a: &S) -> S {
    residual(a).abs()
}

/// Nearest integer with finiteness check and tie flag.
pub fn nearest_int_checked<S: Scalar>(a: &S, guard: TieGuard) -> Result<Rounded<S>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Rounded {
        value: nearest_int(a),
        ambiguous: a.near_half_tie(guard),
    })
}

pub fn frac_norm_checked<S: Scalar>(a: &S) -> Result<S> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(frac_norm(a))
}

/// Representative of `a mod 1` in `[0, 1)`.
pub fn frac01<S: Scalar>(a: &S) -> S {
    a.clone() - a.floor()
}

/// `binom(n, k) = n(n−1)…(n−k+1)/k!`, valid for every integer `n`.
pub fn binom(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(n) - j;
        den *= j + 1;
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, j| acc * j)
}

/// `n^p` in the scalar backend; overflow is an error in floating mode.
pub fn int_pow<S: Scalar>(n: i64, p: u32) -> Result<S> {
    let base = S::from_i64(n);
    let v = (0..p).fold(S::one(), |acc, _| acc * base.clone());
    if !v.is_finite() {
        return Err(Error::Overflow("n^p"));
    }
    Ok(v)
}

/// Converts between backends through the textual form used on the wire.
pub fn convert<A: Scalar, B: Scalar>(a: &A) -> Result<B> {
    B::parse(&a.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn frac_norm_examples() {
        assert_eq!(frac_norm(&q("0.3")), q("3/10"));
        assert_eq!(frac_norm(&q("-1.2")), q("1/5"));
        assert_eq!(frac_norm(&q("2.5")), q("1/2"));
        assert!((frac_norm(&0.3f64) - 0.3).abs() < 1e-15);
        assert!((frac_norm(&-1.2f64) - 0.2).abs() < 1e-15);
        assert_eq!(frac_norm(&2.5f64), 0.5);
    }

    #[test]
    fn nearest_int_ties_go_down() {
        assert_eq!(nearest_int(&q("0.3")), q("0"));
        assert_eq!(nearest_int(&q("0.5")), q("0"));
        assert_eq!(nearest_int(&q("-0.5")), q("-1"));
        assert_eq!(nearest_int(&q("0.7")), q("1"));
        assert_eq!(nearest_int(&q("-2.5")), q("-3"));
        assert_eq!(nearest_int(&0.5f64), 0.0);
        assert_eq!(nearest_int(&-0.5f64), -1.0);
    }

    #[test]
    fn float_ties_are_flagged() {
        let r = nearest_int_checked(&0.5f64, TieGuard::default()).unwrap();
        assert!(r.ambiguous);
        let r = nearest_int_checked(&0.4f64, TieGuard::default()).unwrap();
        assert!(!r.ambiguous);
        let r = nearest_int_checked(&q("1/2"), TieGuard::default()).unwrap();
        assert!(!r.ambiguous);
        assert_eq!(
            nearest_int_checked(&f64::NAN, TieGuard::default()),
            Err(Error::NonFinite)
        );
        assert_eq!(frac_norm_checked(&f64::INFINITY), Err(Error::NonFinite));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(q("1/3"), Rational::new(1.into(), 3.into()));
        assert_eq!(q("-0.25"), Rational::new((-1).into(), 4.into()));
        assert_eq!(q("1e-3"), Rational::new(1.into(), 1000.into()));
        assert_eq!(q("2.5E2"), Rational::from_integer(250.into()));
        assert_eq!(q(".5"), Rational::new(1.into(), 2.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn binom_negative_arguments() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(-1, 2), BigInt::from(1));
        assert_eq!(binom(-3, 3), BigInt::from(-10));
        assert_eq!(binom(2, 3), BigInt::from(0));
        assert_eq!(binom(7, 0), BigInt::from(1));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["1/3", "-7/2", "5", "0"] {
            let v = q(s);
            assert_eq!(Rational::from_json(&v.to_json()).unwrap(), v);
        }
    }

    proptest::proptest! {
        #[test]
        fn residual_in_half_open_interval(p in -10_000i64..10_000, qd in 1i64..200) {
            let a = Rational::new(p.into(), qd.into());
            let r = residual(&a);
            proptest::prop_assert!(r > -Rational::half() && r <= Rational::half());
            proptest::prop_assert_eq!(frac_norm(&a), Signed::abs(&(a.clone() - nearest_int(&a))));
        }
    }
}
