//! Exact rationals and their string encoding.
//!
//! Every rational crosses a serialization boundary as a string `"num/den"`,
//! so no precision is lost in JSON.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_u128(n: u128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `r` as `"num/den"`, including a `/1` denominator for integers.
pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division for huge numerators/denominators.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Exact `r^(1/n)` when `r` is the `n`-th power of a rational.
pub fn exact_root(r: &Rational, n: u32) -> Option<Rational> {
    if n == 0 {
        return None;
    }
    if r.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return exact_root(&-r, n).map(|x| -x);
    }
    let num = r.numer().nth_root(n);
    let den = r.denom().nth_root(n);
    if num.pow(n) == *r.numer() && den.pow(n) == *r.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

/// Serde adapter storing a [`Rational`] as `"num/den"`.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A JSON number that is a `"num/den"` string when exact and a float otherwise.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum Number {
    Exact(String),
    Float(f64),
}

impl Number {
    pub fn new(r: &Rational, exact: bool) -> Self {
        if exact {
            Number::Exact(to_string(r))
        } else {
            Number::Float(to_f64(r))
        }
    }

    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Number::Exact(s) => parse(s),
            Number::Float(f) => Rational::from_float(*f).ok_or_else(|| Error::Parse(format!("non-finite number {f}"))),
        }
    }
}
