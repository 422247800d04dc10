//! Real scalars in two arithmetic modes.
//!
//! [`Rational`] is exact (arbitrary precision) and is the default for every
//! certificate. `f64` is the approximate mode; comparisons in that mode go
//! through a [`Tolerance`] carrying the global absolute slack `τ`.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

/// Which arithmetic a scalar type implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Approx,
}

impl Display for ArithmeticMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithmeticMode::Exact => write!(f, "exact"),
            ArithmeticMode::Approx => write!(f, "approx"),
        }
    }
}

impl FromStr for ArithmeticMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ArithmeticMode::Exact),
            "approx" | "approximate" => Ok(ArithmeticMode::Approx),
            other => Err(Error::Config(format!("unknown arithmetic mode `{other}`"))),
        }
    }
}

/// A real scalar field used by every instance.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: ArithmeticMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `n / d`; panics when `d == 0`.
    fn ratio(n: i64, d: i64) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    /// Approximate conversion from a float (exact for `f64`, dyadic for rationals).
    fn from_f64(x: f64) -> Self;

    /// Encoding of a value as a `[site, …]` line entry: rationals emit
    /// `[site, numerator, denominator]`, floats `[site, value]`.
    fn line_entry(&self, site: i64) -> Value;
    fn from_line_entry(entry: &Value) -> Result<(i64, Self)>;

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn powi(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_nonnegative(&self) -> bool {
        *self >= Self::zero()
    }
}

/// Exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(n: i64, d: i64) -> Self {
        Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Self {
        Rational(BigRational::new(n, d))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Largest integer `≤ self`.
    pub fn floor_i64(&self) -> Option<i64> {
        self.0.floor().to_integer().to_i64()
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse `{s}` as a rational"));
        if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Rational(BigRational::new(n, d)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            // decimal literal, read exactly
            let neg = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches('-'), frac);
            let n = BigInt::from_str(&digits).map_err(|_| bad())?;
            let d = num_traits::pow(BigInt::from(10), frac.len());
            let q = BigRational::new(n, d);
            return Ok(Rational(if neg { -q } else { q }));
        }
        BigInt::from_str(s)
            .map(|n| Rational(BigRational::from_integer(n)))
            .map_err(|_| bad())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn json_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Config(format!("expected an integer, got {n}"))),
        Value::String(s) => {
            BigInt::from_str(s).map_err(|_| Error::Config(format!("expected an integer, got `{s}`")))
        }
        other => Err(Error::Config(format!("expected an integer, got {other}"))),
    }
}

impl Scalar for Rational {
    const MODE: ArithmeticMode = ArithmeticMode::Exact;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational::new(n, d)
    }

    fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn from_f64(x: f64) -> Self {
        Rational(BigRational::from_float(x).expect("finite float"))
    }

    fn line_entry(&self, site: i64) -> Value {
        Value::Array(vec![
            Value::from(site),
            bigint_json(self.numer()),
            bigint_json(self.denom()),
        ])
    }

    fn from_line_entry(entry: &Value) -> Result<(i64, Self)> {
        let arr = entry
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| Error::Config(format!("expected [site, numerator, denominator], got {entry}")))?;
        let site = arr[0]
            .as_i64()
            .ok_or_else(|| Error::Config(format!("bad site in {entry}")))?;
        let n = json_bigint(&arr[1])?;
        let d = json_bigint(&arr[2])?;
        if d.is_zero() {
            return Err(Error::Config(format!("zero denominator in {entry}")));
        }
        Ok((site, Rational(BigRational::new(n, d))))
    }

    fn recip(&self) -> Self {
        Rational(self.0.recip())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RationalVisitor;

        impl<'de> Visitor<'de> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as \"p/q\", a decimal string, or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
                Rational::from_str(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
                Ok(Rational::from_i64(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
                Ok(Rational(BigRational::from_integer(BigInt::from(v))))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Rational, E> {
                // go through the shortest decimal representation so 0.1 means 1/10
                Rational::from_str(&format!("{v}")).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

impl Scalar for f64 {
    const MODE: ArithmeticMode = ArithmeticMode::Approx;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        n as f64 / d as f64
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn line_entry(&self, site: i64) -> Value {
        Value::Array(vec![Value::from(site), Value::from(*self)])
    }

    fn from_line_entry(entry: &Value) -> Result<(i64, Self)> {
        let arr = entry
            .as_array()
            .ok_or_else(|| Error::Config(format!("expected a line entry, got {entry}")))?;
        let site = arr
            .first()
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Config(format!("bad site in {entry}")))?;
        let value = match arr.len() {
            2 => arr[1].as_f64(),
            3 => match (arr[1].as_f64(), arr[2].as_f64()) {
                (Some(n), Some(d)) if d != 0.0 => Some(n / d),
                _ => None,
            },
            _ => None,
        }
        .ok_or_else(|| Error::Config(format!("bad value in {entry}")))?;
        Ok((site, value))
    }

    fn powi(&self, k: i64) -> Self {
        f64::powf(*self, k as f64)
    }
}

/// Comparison slack: zero in exact mode, `τ` in approximate mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerance<S> {
    pub tau: S,
}

impl<S: Scalar> Tolerance<S> {
    pub fn new(tau: S) -> Self {
        Tolerance { tau }
    }

    /// The slack actually applied to comparisons.
    pub fn slack(&self) -> S {
        match S::MODE {
            ArithmeticMode::Exact => S::zero(),
            ArithmeticMode::Approx => self.tau.clone(),
        }
    }

    /// `a ≤ b` up to the slack.
    pub fn le(&self, a: &S, b: &S) -> bool {
        a.clone() <= b.clone() + self.slack()
    }

    /// `|a − b| ≤ slack`.
    pub fn eq(&self, a: &S, b: &S) -> bool {
        (a.clone() - b.clone()).abs() <= self.slack()
    }

    /// `x = 0` up to the slack.
    pub fn is_zero(&self, x: &S) -> bool {
        x.abs() <= self.slack()
    }
}

/// Total order helper for scalars known to be comparable.
pub fn cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Maximum of an iterator of scalars, `zero` for an empty iterator.
pub fn max_or_zero<S: Scalar, I: IntoIterator<Item = S>>(it: I) -> S {
    it.into_iter().fold(S::zero(), S::max_of)
}

/// Rigorous rational enclosure `[lo, hi]` of `e^{-m}` for a nonnegative integer `m`.
///
/// The partial sums of the exponential series bound `e^m` from below; the
/// Lagrange remainder with `e^m < 3^m` bounds it from above.
pub fn exp_neg_enclosure(m: u64, extra_terms: u32) -> (Rational, Rational) {
    if m == 0 {
        return (Rational::one(), Rational::one());
    }
    let mm = Rational::from_i64(m as i64);
    let terms = 3 * m as u32 + 16 + extra_terms;
    let mut partial = Rational::one();
    let mut term = Rational::one();
    for k in 1..=terms {
        term = &(&term * &mm) / &Rational::from_i64(k as i64);
        partial = &partial + &term;
    }
    // next term times e^m bounds the remainder
    let next = &(&term * &mm) / &Rational::from_i64(terms as i64 + 1);
    let remainder = &next * &Rational::from_i64(3).powi(m as i64);
    let upper = &partial + &remainder;
    (upper.recip(), partial.recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal_forms() {
        assert_eq!(Rational::from_str("3/4").unwrap(), Rational::new(3, 4));
        assert_eq!(Rational::from_str("0.1").unwrap(), Rational::new(1, 10));
        assert_eq!(Rational::from_str("-2.5").unwrap(), Rational::new(-5, 2));
        assert_eq!(Rational::from_str("7").unwrap(), Rational::from_i64(7));
        assert!(Rational::from_str("1/0").is_err());
        assert!(Rational::from_str("abc").is_err());
    }

    #[test]
    fn json_round_trip_accepts_numbers() {
        let q: Rational = serde_json::from_str("\"-7/3\"").unwrap();
        assert_eq!(q, Rational::new(-7, 3));
        let q: Rational = serde_json::from_str("5").unwrap();
        assert_eq!(q, Rational::from_i64(5));
        let q: Rational = serde_json::from_str("0.25").unwrap();
        assert_eq!(q, Rational::new(1, 4));
        assert_eq!(serde_json::to_string(&Rational::new(2, 6)).unwrap(), "\"1/3\"");
    }

    #[test]
    fn integer_powers_including_negative() {
        let q = Rational::new(3, 4);
        assert_eq!(q.powi(3), Rational::new(27, 64));
        assert_eq!(q.powi(-2), Rational::new(16, 9));
        assert_eq!(q.powi(0), Rational::one());
        assert!((2.0f64.powi(-3) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn line_entries_use_numerator_denominator_triples() {
        let v = Rational::new(1, 32).line_entry(-5);
        assert_eq!(v, serde_json::json!([-5, 1, 32]));
        let (site, q) = Rational::from_line_entry(&v).unwrap();
        assert_eq!((site, q), (-5, Rational::new(1, 32)));
        let (site, x) = f64::from_line_entry(&serde_json::json!([2, 0.5])).unwrap();
        assert_eq!((site, x), (2, 0.5));
    }

    #[test]
    fn exp_enclosure_brackets_float_value() {
        for m in [1u64, 4, 9, 16, 36] {
            let (lo, hi) = exp_neg_enclosure(m, 0);
            let x = (-(m as f64)).exp();
            assert!(lo <= hi);
            assert!(lo.to_f64() <= x * (1.0 + 1e-12), "m={m}");
            assert!(hi.to_f64() >= x * (1.0 - 1e-12), "m={m}");
            assert!((hi.to_f64() - lo.to_f64()) / x < 1e-6, "m={m}");
        }
    }

    #[test]
    fn tolerance_is_exact_for_rationals() {
        let tol = Tolerance::new(Rational::new(1, 1000));
        assert!(!tol.eq(&Rational::new(1, 2), &Rational::new(501, 1000)));
        let tol = Tolerance::new(1e-3);
        assert!(tol.eq(&0.5, &0.5005));
    }
}
