//! Exact arithmetic in `Q(√s)`: values `p + q√s` with rational `p`, `q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `p + q√s` with `s` squarefree; `q = 0` is normalized to `s = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadraticRepr", into = "QuadraticRepr")]
pub struct QuadraticIrrational {
    p: Rational,
    q: Rational,
    s: u64,
}

#[derive(Serialize, Deserialize)]
struct QuadraticRepr {
    #[serde(with = "rational::serde_str")]
    p: Rational,
    #[serde(with = "rational::serde_str")]
    q: Rational,
    s: u64,
}

impl TryFrom<QuadraticRepr> for QuadraticIrrational {
    type Error = Error;
    fn try_from(r: QuadraticRepr) -> Result<Self> {
        QuadraticIrrational::new(r.p, r.q, r.s)
    }
}

impl From<QuadraticIrrational> for QuadraticRepr {
    fn from(x: QuadraticIrrational) -> Self {
        QuadraticRepr { p: x.p, q: x.q, s: x.s }
    }
}

fn is_squarefree(s: u64) -> bool {
    let mut k = 2u64;
    while k * k <= s {
        if s % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl QuadraticIrrational {
    pub fn new(p: Rational, q: Rational, s: u64) -> Result<Self> {
        if s == 0 || !is_squarefree(s) {
            return Err(Error::InvalidArgument(format!("radicand {s} is not a positive squarefree integer")));
        }
        Ok(Self::normalized(p, q, s))
    }

    fn normalized(p: Rational, q: Rational, s: u64) -> Self {
        if q.is_zero() {
            QuadraticIrrational { p, q, s: 1 }
        } else if s == 1 {
            QuadraticIrrational { p: p + q, q: Rational::zero(), s: 1 }
        } else {
            QuadraticIrrational { p, q, s }
        }
    }

    pub fn rational(r: Rational) -> Self {
        QuadraticIrrational { p: r, q: Rational::zero(), s: 1 }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(rational::int(n))
    }

    /// `√n` for any nonnegative integer, extracting square factors.
    pub fn sqrt_of(n: u64) -> Self {
        let mut outside = 1u64;
        let mut inside = n;
        let mut k = 2u64;
        while k * k <= inside {
            while inside % (k * k) == 0 {
                inside /= k * k;
                outside *= k;
            }
            k += 1;
        }
        Self::normalized(Rational::zero(), rational::int(outside as i64), inside.max(1))
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> u64 {
        self.s
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.p)
    }

    /// Common radicand of two values, treating rationals as compatible with anything.
    fn joint_radicand(&self, other: &Self) -> Result<u64> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.s),
            (_, true) => Ok(self.s),
            _ if self.s == other.s => Ok(self.s),
            _ => Err(Error::InvalidArgument(format!("mixed radicands √{} and √{}", self.s, other.s))),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let s = self.joint_radicand(other)?;
        Ok(Self::normalized(&self.p + &other.p, &self.q + &other.q, s))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other.clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let s = self.joint_radicand(other)?;
        let rs = Rational::from_integer(BigInt::from(s));
        let p = &self.p * &other.p + &self.q * &other.q * rs;
        let q = &self.p * &other.q + &self.q * &other.p;
        Ok(Self::normalized(p, q, s))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        let s = self.joint_radicand(other)?;
        // (a + b√s)/(c + e√s) = (a + b√s)(c - e√s)/(c² - e²s)
        let rs = Rational::from_integer(BigInt::from(s));
        let norm = &other.p * &other.p - &other.q * &other.q * rs;
        let conj = Self::normalized(other.p.clone(), -other.q.clone(), s);
        let num = self.checked_mul(&conj)?;
        Ok(Self::normalized(num.p / &norm, num.q / &norm, s))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::normalized(&self.p * k, &self.q * k, self.s)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Sign of `p + q√s`, decided by comparing `p²` with `q²s` when the terms disagree.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&Rational::zero());
        let sq = self.q.cmp(&Rational::zero());
        match (sp, sq) {
            (a, Ordering::Equal) => a,
            (Ordering::Equal, b) => b,
            (a, b) if a == b => a,
            (a, _) => {
                let p2 = &self.p * &self.p;
                let q2s = &self.q * &self.q * Rational::from_integer(BigInt::from(self.s));
                match p2.cmp(&q2s) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        Self::normalized(&self.p - r, self.q.clone(), self.s).signum()
    }

    /// Exact `⌊x⌋`, via the integer square root of the radical part.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.p.floor().to_integer();
        }
        // x = (A + B√s)/D over a common denominator D > 0.
        let den = self.p.denom().lcm(self.q.denom());
        let a = (&self.p * Rational::from_integer(den.clone())).to_integer();
        let b = (&self.q * Rational::from_integer(den.clone())).to_integer();
        let root = (&b * &b * BigInt::from(self.s)).sqrt();
        // b√s is irrational and lies in (root, root+1) or (-root-1, -root).
        let lower = if b.is_positive() { a + root } else { a - root - BigInt::one() };
        lower.div_floor(&den)
    }

    pub fn ceil(&self) -> BigInt {
        if self.is_rational() {
            return self.p.ceil().to_integer();
        }
        self.floor() + BigInt::one()
    }

    /// `⌈n·x⌉` as a machine integer; callers keep rates positive.
    pub fn ceil_multiple(&self, n: u64) -> u64 {
        self.scale(&Rational::from_integer(BigInt::from(n)))
            .ceil()
            .to_u64()
            .expect("ceiling fits in u64")
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.p) + rational::to_f64(&self.q) * (self.s as f64).sqrt()
    }
}

impl Neg for QuadraticIrrational {
    type Output = QuadraticIrrational;
    fn neg(self) -> Self {
        QuadraticIrrational { p: -self.p, q: -self.q, s: self.s }
    }
}

macro_rules! checked_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for &QuadraticIrrational {
            type Output = QuadraticIrrational;
            /// Panics on mixed radicands; use the `checked_*` form otherwise.
            fn $method(self, rhs: Self) -> QuadraticIrrational {
                self.$checked(rhs).expect("compatible radicands")
            }
        }
    };
}

checked_op!(Add, add, checked_add);
checked_op!(Sub, sub, checked_sub);
checked_op!(Mul, mul, checked_mul);
checked_op!(Div, div, checked_div);

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.p);
        }
        let radical = if self.q.is_one() { format!("√{}", self.s) } else { format!("{}√{}", self.q, self.s) };
        if self.p.is_zero() {
            write!(f, "{radical}")
        } else {
            write!(f, "{} + {radical}", self.p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn sqrt2() -> QuadraticIrrational {
        QuadraticIrrational::sqrt_of(2)
    }

    #[test]
    fn ceilings_of_multiples_of_root_two() {
        let expect = [2u64, 3, 5, 6, 8, 9, 10, 12, 13, 15, 16, 17];
        for (n, &e) in (1..=12).zip(&expect) {
            assert_eq!(sqrt2().ceil_multiple(n), e, "n = {n}");
        }
        assert_eq!(sqrt2().ceil_multiple(29), 42);
        assert_eq!(sqrt2().ceil_multiple(0), 0);
    }

    #[test]
    fn floor_handles_negative_radical_part() {
        let x = QuadraticIrrational::new(int(3), int(-1), 2).unwrap(); // 3 - √2 ≈ 1.586
        assert_eq!(x.floor(), BigInt::from(1));
        assert_eq!(x.ceil(), BigInt::from(2));
        let y = QuadraticIrrational::new(ratio(1, 3), ratio(-5, 7), 3).unwrap();
        assert_eq!(y.floor(), BigInt::from((1.0f64 / 3.0 - 5.0 / 7.0 * 3f64.sqrt()).floor() as i64));
    }

    #[test]
    fn construction_and_normalization() {
        assert!(QuadraticIrrational::new(int(0), int(1), 8).is_err());
        assert!(QuadraticIrrational::new(int(0), int(1), 0).is_err());
        let r = QuadraticIrrational::new(int(2), int(3), 1).unwrap();
        assert_eq!(r.as_rational(), Some(&int(5)));
        assert_eq!(QuadraticIrrational::sqrt_of(25).as_rational(), Some(&int(5)));
        let s8 = QuadraticIrrational::sqrt_of(8);
        assert_eq!((s8.q().clone(), s8.radicand()), (int(2), 2));
    }

    #[test]
    fn field_operations() {
        let a = QuadraticIrrational::new(int(1), int(1), 2).unwrap();
        let b = QuadraticIrrational::new(int(1), int(-1), 2).unwrap();
        assert_eq!((&a * &b).as_rational(), Some(&int(-1)));
        let q = &a / &a;
        assert_eq!(q.as_rational(), Some(&int(1)));
        assert!(a.checked_add(&QuadraticIrrational::sqrt_of(3)).is_err());
        assert_eq!(sqrt2().cmp_rational(&ratio(141, 100)), Ordering::Greater);
        assert_eq!(sqrt2().cmp_rational(&ratio(142, 100)), Ordering::Less);
        assert_eq!(b.signum(), Ordering::Less);
    }

    #[test]
    fn json_form() {
        let x: QuadraticIrrational = serde_json::from_str(r#"{"p":"0/1","q":"1/1","s":2}"#).unwrap();
        assert_eq!(x, sqrt2());
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"p":"0/1","q":"1/1","s":2}"#);
        assert!(serde_json::from_str::<QuadraticIrrational>(r#"{"p":"0","q":"1","s":4}"#).is_err());
    }

    proptest! {
        #[test]
        fn floor_brackets_value(p in -50i64..50, pd in 1i64..9, q in -50i64..50, qd in 1i64..9,
                                s in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 11])) {
            let x = QuadraticIrrational::new(ratio(p, pd), ratio(q, qd), s).unwrap();
            let fl = Rational::from_integer(x.floor());
            prop_assert_ne!(x.cmp_rational(&fl), Ordering::Less);
            prop_assert_eq!(x.cmp_rational(&(fl + int(1))), Ordering::Less);
        }
    }
}
