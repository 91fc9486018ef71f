//! Minkowski inequalities among mixed multiplicities of two filtrations.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::multiplicity::{
    filtration_multiplicity, limit_normalized_colength, mixed_multiplicity_table, MixedTable, Strategy,
};
use crate::rational::{self, Number, Rational};

/// Precision (in bits) beyond which root comparisons give up.
const MAX_ROOT_BITS: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub name: String,
    pub left: Number,
    pub right: Number,
    /// `right - left`.
    pub slack: Number,
    pub pass: bool,
    /// Whether the verdict was reached in exact arithmetic or by a sound enclosure.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub d: usize,
    /// `E(i) = e(I(1)^{[i]}, I(2)^{[d-i]})` for `i = 0..=d`.
    pub mixed: Vec<Number>,
    pub e1: Number,
    pub e2: Number,
    pub e12: Number,
    pub records: Vec<InequalityRecord>,
    pub pass: bool,
}

impl InequalityReport {
    pub fn slacks(&self) -> Vec<Number> {
        self.records.iter().map(|r| r.slack.clone()).collect()
    }

    pub fn violations(&self) -> impl Iterator<Item = &InequalityRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

/// Compares `a` with `b` allowing `tolerance` when not exact.
fn compare_record(name: String, left: Rational, right: Rational, exact: bool, tolerance: f64) -> InequalityRecord {
    let slack = &right - &left;
    let pass = if exact { !slack.is_negative() } else { rational::to_f64(&slack) >= -tolerance };
    InequalityRecord {
        name,
        left: Number::new(&left, exact),
        right: Number::new(&right, exact),
        slack: Number::new(&slack, exact),
        pass,
        certified: exact,
    }
}

/// `⌊x^{1/d}·2^k⌋ / 2^k` and that plus `2^{-k}`: an enclosure of the real root.
fn root_bounds(x: &Rational, d: u32, k: u64) -> (Rational, Rational) {
    let scale = BigInt::from(1) << k as usize;
    let scaled = (x * Rational::from_integer(num_traits::pow(scale.clone(), d as usize))).floor().to_integer();
    let lo = scaled.nth_root(d);
    let lo_r = Rational::new(lo.clone(), scale.clone());
    let hi_r = Rational::new(lo + 1, scale);
    (lo_r, hi_r)
}

/// Decides `a <= (b^{1/d} + c^{1/d})^d` for nonnegative rationals.
///
/// Returns `(pass, slack)`; the slack is exact when `c/b` is a perfect
/// `d`-th power (or a term vanishes) and a midpoint approximation otherwise.
/// In the latter case `(b^{1/d} + c^{1/d})^d` is irrational, so equality is
/// impossible and refining the enclosure always terminates.
pub fn root_sum_dominates(a: &Rational, b: &Rational, c: &Rational, d: u32) -> Result<(bool, Number, Number)> {
    if a.is_negative() || b.is_negative() || c.is_negative() {
        return Err(Error::InvalidArgument("multiplicities must be nonnegative".into()));
    }
    let exact_rhs = if b.is_zero() {
        Some(c.clone())
    } else if c.is_zero() {
        Some(b.clone())
    } else {
        rational::exact_root(&(c / b), d).map(|t| b * num_traits::pow(Rational::from_integer(1.into()) + t, d as usize))
    };
    if let Some(rhs) = exact_rhs {
        let slack = &rhs - a;
        return Ok((!slack.is_negative(), Number::new(&rhs, true), Number::new(&slack, true)));
    }
    let mut k = 16u64;
    while k <= MAX_ROOT_BITS {
        let (b_lo, b_hi) = root_bounds(b, d, k);
        let (c_lo, c_hi) = root_bounds(c, d, k);
        let lo = num_traits::pow(&b_lo + &c_lo, d as usize);
        let hi = num_traits::pow(&b_hi + &c_hi, d as usize);
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if *a <= lo {
            return Ok((true, Number::new(&mid, false), Number::new(&(&mid - a), false)));
        }
        if *a > hi {
            return Ok((false, Number::new(&mid, false), Number::new(&(&mid - a), false)));
        }
        k *= 2;
    }
    Err(Error::BudgetExceeded("root comparison did not separate".into()))
}

/// All four families of Minkowski inequalities for `(F1, F2)`.
pub fn minkowski_report(f1: &Filtration, f2: &Filtration, strategy: &Strategy, tolerance: f64) -> Result<InequalityReport> {
    let fs = [f1.clone(), f2.clone()];
    let table: MixedTable = mixed_multiplicity_table(&fs, strategy)?;
    let d = table.d;
    let e1 = filtration_multiplicity(f1, strategy)?;
    let e2 = filtration_multiplicity(f2, strategy)?;
    let p11 = limit_normalized_colength(&fs, &[1, 1], strategy)?;
    let e12 = &p11.value * Rational::from_integer(rational::factorial(d));
    let exact = table.exact && e1.exact && e2.exact && p11.exact;

    let mixed: Vec<Rational> = (0..=d as u64).map(|i| table.value(&[i, d as u64 - i]).expect("entry").clone()).collect();
    let (a, b) = (&e1.value, &e2.value);
    let mut records = Vec::new();
    for i in 1..d {
        records.push(compare_record(
            format!("log_convexity[{i}]"),
            &mixed[i] * &mixed[i],
            &mixed[i + 1] * &mixed[i - 1],
            exact,
            tolerance,
        ));
    }
    for i in 0..=d {
        records.push(compare_record(format!("product_bound[{i}]"), &mixed[i] * &mixed[d - i], a * b, exact, tolerance));
    }
    for i in 0..=d {
        records.push(compare_record(
            format!("power_bound[{i}]"),
            num_traits::pow(mixed[d - i].clone(), d),
            num_traits::pow(a.clone(), d - i) * num_traits::pow(b.clone(), i),
            exact,
            tolerance,
        ));
    }
    if exact {
        let (pass, rhs, slack) = root_sum_dominates(&e12, a, b, d as u32)?;
        records.push(InequalityRecord {
            name: "root_subadditivity".into(),
            left: Number::new(&e12, true),
            right: rhs,
            slack,
            pass,
            certified: true,
        });
    } else {
        let dd = d as f64;
        let lhs = rational::to_f64(&e12).max(0.0).powf(1.0 / dd);
        let rhs = rational::to_f64(a).max(0.0).powf(1.0 / dd) + rational::to_f64(b).max(0.0).powf(1.0 / dd);
        records.push(InequalityRecord {
            name: "root_subadditivity".into(),
            left: Number::Float(lhs.powf(dd)),
            right: Number::Float(rhs.powf(dd)),
            slack: Number::Float(rhs.powf(dd) - lhs.powf(dd)),
            pass: rhs - lhs >= -tolerance,
            certified: false,
        });
    }
    let pass = records.iter().all(|r| r.pass);
    Ok(InequalityReport {
        d,
        mixed: mixed.iter().map(|x| Number::new(x, exact)).collect(),
        e1: Number::new(a, exact),
        e2: Number::new(b, exact),
        e12: Number::new(&e12, exact),
        records,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::MonomialIdeal;
    use crate::rational::{int, ratio};

    fn power(rows: &[&[u32]]) -> Filtration {
        Filtration::power(MonomialIdeal::from_rows(2, rows).unwrap()).unwrap()
    }

    #[test]
    fn bhattacharya_pair() {
        let r = minkowski_report(&power(&[&[2, 0], &[0, 1]]), &power(&[&[1, 0], &[0, 3]]), &Strategy::exact(), 0.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.mixed, vec![Number::Exact("3/1".into()), Number::Exact("1/1".into()), Number::Exact("2/1".into())]);
        assert_eq!(r.e12, Number::Exact("7/1".into()));
        let log = &r.records[0];
        assert_eq!((log.left.clone(), log.right.clone()), (Number::Exact("1/1".into()), Number::Exact("6/1".into())));
        let root = r.records.last().unwrap();
        assert!(root.pass && root.certified);
        assert!(matches!(root.slack, Number::Float(s) if s > 0.0));
    }

    #[test]
    fn identical_filtrations_are_tight() {
        let f = power(&[&[3, 0], &[1, 1], &[0, 4]]);
        let r = minkowski_report(&f, &f, &Strategy::exact(), 0.0).unwrap();
        assert!(r.pass);
        for rec in &r.records[..r.records.len() - 1] {
            assert_eq!(rec.slack, Number::Exact("0/1".into()), "{}", rec.name);
        }
        // e(I·I) = 4e(I) < (2e(I)^{1/2})² only as an equality: 28 = 28.
        assert_eq!(r.records.last().unwrap().slack, Number::Exact("0/1".into()));
    }

    #[test]
    fn powers_and_shifted_powers_reach_equality() {
        for d in 1..=3 {
            let m = MonomialIdeal::maximal(d);
            let f1 = Filtration::power(m.clone()).unwrap();
            let f2 = Filtration::shifted_power(m, 1).unwrap();
            let r = minkowski_report(&f1, &f2, &Strategy::exact(), 0.0).unwrap();
            let root = r.records.last().unwrap();
            assert!(root.pass);
            assert_eq!(root.slack, Number::Exact("0/1".into()));
            assert_eq!(r.e12, Number::new(&Rational::from_integer(num_traits::pow(BigInt::from(2), d)), true));
        }
    }

    #[test]
    fn root_comparisons() {
        // 7 <= (√2 + √3)² = 5 + 2√6 ≈ 9.9.
        assert!(root_sum_dominates(&int(7), &int(2), &int(3), 2).unwrap().0);
        assert!(!root_sum_dominates(&int(10), &int(2), &int(3), 2).unwrap().0);
        // (∛1 + ∛8)³ = 27 exactly.
        let (pass, rhs, slack) = root_sum_dominates(&int(27), &int(1), &int(8), 3).unwrap();
        assert!(pass);
        assert_eq!(rhs, Number::Exact("27/1".into()));
        assert_eq!(slack, Number::Exact("0/1".into()));
        assert!(!root_sum_dominates(&ratio(271, 10), &int(1), &int(8), 3).unwrap().0);
        // Close call: (∛2 + ∛3)³ ≈ 19.73051
        assert!(root_sum_dominates(&ratio(197305, 10000), &int(2), &int(3), 3).unwrap().0);
        assert!(!root_sum_dominates(&ratio(197306, 10000), &int(2), &int(3), 3).unwrap().0);
        assert!(root_sum_dominates(&int(5), &int(0), &int(5), 4).unwrap().0);
    }
}
