//! Rees specialization of mixed multiplicities and invariance under integral closure.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::ideal::{Exponent, MonomialIdeal};
use crate::multiplicity::{filtration_multiplicity, mixed_multiplicity_table, LimitEstimate, MixedTable, Strategy};
use crate::newton::integral_closure;
use crate::rational::{self, Number, Rational};

/// Equality of two estimates: exact when both are, otherwise within the sum
/// of their error bounds plus `tolerance`.
fn agree(a: &Rational, a_err: &Rational, b: &Rational, b_err: &Rational, exact: bool, tolerance: f64) -> bool {
    if exact {
        a == b
    } else {
        rational::to_f64(&(a - b).abs()) <= rational::to_f64(&(a_err + b_err)) + tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DropCheck {
    /// Mixed type in the full table; its `slot` coordinate is zero.
    #[serde(rename = "type")]
    pub degrees: Vec<u64>,
    pub full: Number,
    pub reduced: Number,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReesReport {
    /// Zero-based slot.
    pub slot: usize,
    pub d: usize,
    pub exact: bool,
    pub concentrated: Number,
    pub single: Number,
    pub concentrated_pass: bool,
    pub drops: Vec<DropCheck>,
    pub pass: bool,
}

fn entry_error(t: &MixedTable, degrees: &[u64]) -> (Rational, Rational) {
    let e = t.entry(degrees).expect("type present in table");
    (e.value.clone(), e.error_bound.clone())
}

/// Checks that the table entry concentrated on `slot` is the multiplicity of
/// `fs[slot]` alone, and that entries with a zero in `slot` do not see `fs[slot]`.
pub fn rees_identity_check(fs: &[Filtration], slot: usize, strategy: &Strategy, tolerance: f64) -> Result<ReesReport> {
    if slot >= fs.len() {
        return Err(Error::InvalidArgument(format!("slot {slot} out of range for {} filtrations", fs.len())));
    }
    let table = mixed_multiplicity_table(fs, strategy)?;
    let d = table.d;
    let mut concentrated_type = vec![0u64; fs.len()];
    concentrated_type[slot] = d as u64;
    let (cv, ce) = entry_error(&table, &concentrated_type);
    let single: LimitEstimate = filtration_multiplicity(&fs[slot], strategy)?;
    let mut exact = table.exact && single.exact;
    let concentrated_pass = agree(&cv, &ce, &single.value, &single.error_bound, exact, tolerance);

    let mut drops = Vec::new();
    if fs.len() > 1 {
        let reduced: Vec<Filtration> =
            fs.iter().enumerate().filter(|&(j, _)| j != slot).map(|(_, f)| f.clone()).collect();
        let small = mixed_multiplicity_table(&reduced, strategy)?;
        let drop_exact = table.exact && small.exact;
        exact &= drop_exact;
        for entry in table.entries.iter().filter(|e| e.degrees[slot] == 0) {
            let mut short = entry.degrees.clone();
            short.remove(slot);
            let (sv, se) = entry_error(&small, &short);
            drops.push(DropCheck {
                degrees: entry.degrees.clone(),
                full: Number::new(&entry.value, drop_exact),
                reduced: Number::new(&sv, drop_exact),
                pass: agree(&entry.value, &entry.error_bound, &sv, &se, drop_exact, tolerance),
            });
        }
    }
    let pass = concentrated_pass && drops.iter().all(|c| c.pass);
    Ok(ReesReport {
        slot,
        d,
        exact,
        concentrated: Number::new(&cv, table.exact),
        single: Number::new(&single.value, single.exact),
        concentrated_pass,
        drops,
        pass,
    })
}

/// The converse example: `{m^n}` and `{m^{n+1}}` share multiplicity 1 but
/// `x_1 ∈ m` is not integral over `⊕ m^{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConverseDemo {
    pub dim: usize,
    pub e_powers: Number,
    pub e_shifted: Number,
    pub equal_multiplicities: bool,
    /// Smallest `n` with `m^n != m^{n+1}`.
    pub first_difference: u64,
    /// `x_1^k ∉ m^{k+1}` verified for all `k` up to this bound.
    pub not_integral_up_to: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub ideal: MonomialIdeal,
    pub closure: MonomialIdeal,
    pub e_ideal: Number,
    pub e_closure: Number,
    pub exact: bool,
    pub pass: bool,
    pub converse: ConverseDemo,
}

const CONVERSE_DEPTH: u64 = 6;

pub fn converse_demo(dim: usize, strategy: &Strategy) -> Result<ConverseDemo> {
    let m = MonomialIdeal::maximal(dim);
    let f = Filtration::power(m.clone())?;
    let g = Filtration::shifted_power(m.clone(), 1)?;
    let ef = filtration_multiplicity(&f, strategy)?;
    let eg = filtration_multiplicity(&g, strategy)?;
    let first_difference = (1..).find(|&n| f.ideal_at(n).ok() != g.ideal_at(n).ok()).expect("filtrations differ");
    let mut not_integral_up_to = 0;
    for k in 1..=CONVERSE_DEPTH {
        if g.ideal_at(k)?.contains(&Exponent::pure(dim, 0, k as u32))? {
            break;
        }
        not_integral_up_to = k;
    }
    Ok(ConverseDemo {
        dim,
        equal_multiplicities: ef.value == eg.value,
        e_powers: Number::new(&ef.value, ef.exact),
        e_shifted: Number::new(&eg.value, eg.exact),
        first_difference,
        not_integral_up_to,
    })
}

/// `e({I'^n}) = e({Ī^n})` where `Ī` is the integral closure of `I'`.
pub fn integrality_check(ideal: &MonomialIdeal, strategy: &Strategy, tolerance: f64) -> Result<IntegralityReport> {
    if !ideal.is_m_primary() {
        return Err(Error::NotMPrimary);
    }
    let closure = integral_closure(ideal)?;
    let a = filtration_multiplicity(&Filtration::power(ideal.clone())?, strategy)?;
    let b = filtration_multiplicity(&Filtration::power(closure.clone())?, strategy)?;
    let exact = a.exact && b.exact;
    let pass = agree(&a.value, &a.error_bound, &b.value, &b.error_bound, exact, tolerance);
    Ok(IntegralityReport {
        ideal: ideal.clone(),
        e_ideal: Number::new(&a.value, a.exact),
        e_closure: Number::new(&b.value, b.exact),
        closure,
        exact,
        pass,
        converse: converse_demo(ideal.dim(), strategy)?,
    })
}
