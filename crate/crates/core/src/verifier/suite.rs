//! Randomized property suites, one JSON-lines record per instance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::minkowski::minkowski_report;
use super::random::{instance_rng, random_primary_ideal};
use super::rees::{integrality_check, rees_identity_check};
use crate::error::Result;
use crate::filtration::Filtration;
use crate::multiplicity::{hilbert_samuel_multiplicity, Strategy};
use crate::newton::covolume;
use crate::rational::{self, Number, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteRecord {
    pub seed: u64,
    pub case: String,
    pub pass: bool,
    pub slacks: Vec<Number>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Outcome of a whole suite, in instance order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub name: String,
    pub records: Vec<SuiteRecord>,
}

impl SuiteSummary {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.pass).count()
    }

    pub fn to_json_lines(&self) -> String {
        to_json_lines(&self.records)
    }
}

pub fn to_json_lines(records: &[SuiteRecord]) -> String {
    records.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
}

/// Runs `check` for seeds `base_seed, base_seed + 1, ...` in parallel and
/// returns records in seed order.
fn run(
    name: &str,
    base_seed: u64,
    count: usize,
    check: impl Fn(u64, usize) -> Result<(String, bool, Vec<Number>)> + Sync,
) -> SuiteSummary {
    let records = (0..count)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i as u64);
            match check(seed, i) {
                Ok((case, pass, slacks)) => SuiteRecord { seed, case, pass, slacks, error: None },
                Err(e) => SuiteRecord { seed, case: format!("{name}#{i}"), pass: false, slacks: Vec::new(), error: Some(e.to_string()) },
            }
        })
        .collect();
    SuiteSummary { name: name.to_string(), records }
}

/// Minkowski inequalities for random pairs of power filtrations.
pub fn minkowski_suite(base_seed: u64, count: usize, dim: usize, max_exp: u32) -> SuiteSummary {
    run(&format!("minkowski_d{dim}"), base_seed, count, |seed, _| {
        let mut rng = instance_rng(seed);
        let a = random_primary_ideal(&mut rng, dim, max_exp);
        let b = random_primary_ideal(&mut rng, dim, max_exp);
        let report = minkowski_report(&Filtration::power(a.clone())?, &Filtration::power(b.clone())?, &Strategy::exact(), 0.0)?;
        Ok((format!("minkowski {a} | {b}"), report.pass, report.slacks()))
    })
}

/// Rees identity (every slot) for random pairs of power filtrations.
pub fn rees_suite(base_seed: u64, count: usize, dim: usize, max_exp: u32) -> SuiteSummary {
    run(&format!("rees_d{dim}"), base_seed, count, |seed, _| {
        let mut rng = instance_rng(seed);
        let a = random_primary_ideal(&mut rng, dim, max_exp);
        let b = random_primary_ideal(&mut rng, dim, max_exp);
        let fs = [Filtration::power(a.clone())?, Filtration::power(b.clone())?];
        let mut pass = true;
        let mut slacks = Vec::new();
        for slot in 0..fs.len() {
            let r = rees_identity_check(&fs, slot, &Strategy::exact(), 0.0)?;
            pass &= r.pass;
            slacks.push(Number::new(&(r.single.to_rational()? - r.concentrated.to_rational()?), r.exact));
        }
        Ok((format!("rees {a} | {b}"), pass, slacks))
    })
}

/// `e` is unchanged by integral closure; dimensions cycle through `1..=max_dim`.
pub fn integrality_suite(base_seed: u64, count: usize, max_dim: usize, max_exp: u32) -> SuiteSummary {
    run("integrality", base_seed, count, |seed, i| {
        let dim = 1 + i % max_dim;
        let ideal = random_primary_ideal(&mut instance_rng(seed), dim, max_exp);
        let r = integrality_check(&ideal, &Strategy::exact(), 0.0)?;
        let slack = r.e_closure.to_rational()? - r.e_ideal.to_rational()?;
        Ok((format!("integrality {ideal}"), r.pass, vec![Number::new(&slack, r.exact)]))
    })
}

/// `e(I) = d!·covol(NP(I))`, the finite-difference multiplicity against the Newton region.
pub fn cross_oracle_suite(base_seed: u64, count: usize, max_dim: usize, max_exp: u32) -> SuiteSummary {
    run("cross_oracle", base_seed, count, |seed, i| {
        let dim = 1 + i % max_dim;
        let ideal = random_primary_ideal(&mut instance_rng(seed), dim, max_exp);
        let e = Rational::from_integer(hilbert_samuel_multiplicity(&ideal)?.into());
        let vol = covolume(&ideal)? * Rational::from_integer(rational::factorial(dim));
        Ok((format!("cross_oracle {ideal}"), e == vol, vec![Number::new(&(vol - e), true)]))
    })
}
