//! Task dispatch and report rendering.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use filtmult::error::{Error, Result};
use filtmult::filtration::Filtration;
use filtmult::ideal::MonomialIdeal;
use filtmult::multi::MultiFiltration;
use filtmult::multiplicity::{
    filtration_multiplicity, fit_quasi_polynomial, mixed_multiplicity_table, monomial_types,
    truncation_convergence, LimitEstimate, Strategy,
};
use filtmult::okounkov::volume_limit_check;
use filtmult::rational::{self, Number};
use filtmult::verifier::{
    integrality_check, integrality_suite, minkowski_report, minkowski_suite, non_polynomial_witness, rees_identity_check,
    rees_suite, standard_points, SuiteSummary, DEFAULT_HOMOGENEITY_TOLERANCE, DEFAULT_THRESHOLD,
};

use crate::spec::{missing, ProblemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Colength,
    Multiplicity,
    Mixed,
    TruncateConverge,
    Quasipoly,
    Okounkov,
    Minkowski,
    Rees,
    Integrality,
    MultigradedDemo,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Colength => "colength",
            Task::Multiplicity => "multiplicity",
            Task::Mixed => "mixed",
            Task::TruncateConverge => "truncate-converge",
            Task::Quasipoly => "quasipoly",
            Task::Okounkov => "okounkov",
            Task::Minkowski => "minkowski",
            Task::Rees => "rees",
            Task::Integrality => "integrality",
            Task::MultigradedDemo => "multigraded-demo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A finished report in both renderings. `failed` marks a property check
/// that ran to completion and found a violation.
pub struct Output {
    pub json: String,
    pub text: String,
    pub failed: bool,
}

/// Numeric budget used by the multigraded demo when none is given.
const DEMO_BUDGET: u64 = 4096;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    task: &'a str,
    report: T,
}

fn report<T: Serialize>(task: Task, value: &T, text: String, failed: bool) -> Output {
    let json = serde_json::to_string_pretty(&Envelope { task: task.name(), report: value }).expect("reports serialize") + "\n";
    Output { json, text, failed }
}

fn suite(s: SuiteSummary) -> Output {
    let mut text = String::new();
    for r in &s.records {
        let _ = writeln!(text, "{} seed={} {}", if r.pass { "PASS" } else { "FAIL" }, r.seed, r.case);
    }
    let _ = writeln!(text, "{}: {} of {} failed", s.name, s.failures(), s.records.len());
    Output { json: s.to_json_lines(), failed: !s.pass(), text }
}

fn number(n: &Number) -> String {
    match n {
        Number::Exact(s) => s.clone(),
        Number::Float(f) => format!("{f:.6}"),
    }
}

fn estimate(e: &LimitEstimate) -> String {
    if e.exact {
        rational::to_string(&e.value)
    } else {
        format!("{:.6} (± {:.2e}, numeric)", e.to_f64(), rational::to_f64(&e.error_bound))
    }
}

fn single_filtration(spec: &ProblemSpec) -> Result<Filtration> {
    match spec.filtrations.first() {
        Some(_) => Ok(spec.filtrations(1)?.remove(0)),
        None => Filtration::power(spec.ideal()?),
    }
}

pub fn run(task: Task, spec: &ProblemSpec, seed: u64, budget: Option<u64>) -> Result<Output> {
    let strategy = spec.strategy(budget);
    match task {
        Task::Colength => {
            let ideal = match (&spec.ideal, &spec.n) {
                (Some(_), _) => spec.ideal()?,
                (None, Some(n)) => {
                    let fs = spec.filtrations(1)?;
                    if n.len() != fs.len() {
                        return Err(Error::ArityMismatch { expected: fs.len(), found: n.len() });
                    }
                    let mut acc = MonomialIdeal::unit(fs[0].dim());
                    for (f, &k) in fs.iter().zip(n) {
                        acc = acc.product(&f.ideal_at(k)?)?;
                    }
                    acc
                }
                (None, None) => return Err(missing("ideal")),
            };
            let colength = ideal.colength()?;
            #[derive(Serialize)]
            struct R {
                ideal: MonomialIdeal,
                colength: u64,
            }
            Ok(report(task, &R { ideal: ideal.clone(), colength }, format!("colength of {ideal} = {colength}\n"), false))
        }
        Task::Multiplicity => {
            let f = single_filtration(spec)?;
            let e = filtration_multiplicity(&f, &strategy)?;
            #[derive(Serialize)]
            struct R {
                filtration: Filtration,
                multiplicity: LimitEstimate,
            }
            let text = format!("e = {}\n", estimate(&e));
            Ok(report(task, &R { filtration: f, multiplicity: e }, text, false))
        }
        Task::Mixed => {
            let fs = spec.filtrations(1)?;
            let table = mixed_multiplicity_table(&fs, &strategy)?;
            #[derive(Serialize)]
            struct Eval {
                n: Vec<u64>,
                value: Number,
            }
            #[derive(Serialize)]
            struct R {
                table: filtmult::multiplicity::MixedTable,
                evaluations: Vec<Eval>,
            }
            let mut text = String::new();
            for e in &table.entries {
                let _ = writeln!(text, "e{:?} = {}", e.degrees, number(&Number::new(&e.value, e.exact)));
            }
            let mut evaluations = Vec::new();
            for n in spec.points.clone().unwrap_or_default() {
                if n.len() != fs.len() {
                    return Err(Error::ArityMismatch { expected: fs.len(), found: n.len() });
                }
                let value = Number::new(&table.evaluate(&n), table.exact);
                let _ = writeln!(text, "G{n:?} = {}", number(&value));
                evaluations.push(Eval { n, value });
            }
            Ok(report(task, &R { table, evaluations }, text, false))
        }
        Task::TruncateConverge => {
            let fs = spec.filtrations(1)?;
            let schedule = spec.schedule.clone().ok_or_else(|| missing("schedule"))?;
            let targets = spec.targets.clone().unwrap_or_else(|| monomial_types(fs.len(), fs[0].dim()));
            let r = truncation_convergence(&fs, &schedule, &targets, &spec.exact_config())?;
            let mut text = String::new();
            for (i, t) in r.targets.iter().enumerate() {
                let seq: Vec<String> = r.sequence(i).iter().map(rational::to_string).collect();
                let _ = writeln!(text, "e{t:?}: {}", seq.join(", "));
            }
            Ok(report(task, &r, text, false))
        }
        Task::Quasipoly => {
            let fs = spec.filtrations(1)?;
            let period = match spec.period {
                Some(p) => p,
                None => fs.iter().try_fold(1u64, |acc, f| {
                    f.certified_scale()
                        .map(|s| rational::lcm(acc, s))
                        .ok_or_else(|| Error::InvalidArgument("no certified scale; give `period`".into()))
                })?,
            };
            let q = fit_quasi_polynomial(&fs, period, spec.window.unwrap_or(1))?;
            let mut text = format!("period {}, degree {}\n", q.period, q.degree);
            for (c, class) in q.classes.iter().enumerate() {
                let top: Vec<String> =
                    q.top_coefficients(c).iter().map(|(p, v)| format!("{p:?}: {}", rational::to_string(v))).collect();
                let _ = writeln!(text, "residue {:?} from {}: top {}", class.residue, class.threshold, top.join(", "));
            }
            Ok(report(task, &q, text, false))
        }
        Task::Okounkov => {
            let f = single_filtration(spec)?;
            let r = volume_limit_check(&f, spec.m.unwrap_or(256))?;
            let text = format!(
                "beta {}, m {}: vol_hat - vol_body = {}, limit {}, relative gap {:.4}\n",
                r.beta,
                r.m,
                r.difference,
                number(&r.limit),
                r.relative_gap
            );
            Ok(report(task, &r, text, false))
        }
        Task::Minkowski => {
            if let Some(rs) = &spec.random {
                return Ok(suite(minkowski_suite(seed, rs.count, rs.dim, rs.max_exp)));
            }
            let fs = spec.filtrations(2)?;
            let r = minkowski_report(&fs[0], &fs[1], &strategy, spec.tolerance.unwrap_or(1e-6))?;
            let mut text = String::new();
            for rec in &r.records {
                let _ = writeln!(
                    text,
                    "{} {}: {} <= {} (slack {})",
                    if rec.pass { "PASS" } else { "FAIL" },
                    rec.name,
                    number(&rec.left),
                    number(&rec.right),
                    number(&rec.slack)
                );
            }
            Ok(report(task, &r, text, !r.pass))
        }
        Task::Rees => {
            if let Some(rs) = &spec.random {
                return Ok(suite(rees_suite(seed, rs.count, rs.dim, rs.max_exp)));
            }
            let fs = spec.filtrations(1)?;
            let slots: Vec<usize> = match spec.slot {
                Some(s) => vec![s],
                None => (0..fs.len()).collect(),
            };
            let tolerance = spec.tolerance.unwrap_or(1e-6);
            let reports = slots.iter().map(|&s| rees_identity_check(&fs, s, &strategy, tolerance)).collect::<Result<Vec<_>>>()?;
            let mut text = String::new();
            for r in &reports {
                let _ = writeln!(
                    text,
                    "{} slot {}: concentrated {} vs single {}; {} drop checks",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.slot,
                    number(&r.concentrated),
                    number(&r.single),
                    r.drops.len()
                );
            }
            let failed = reports.iter().any(|r| !r.pass);
            Ok(report(task, &reports, text, failed))
        }
        Task::Integrality => {
            if let Some(rs) = &spec.random {
                return Ok(suite(integrality_suite(seed, rs.count, rs.dim, rs.max_exp)));
            }
            let r = integrality_check(&spec.ideal()?, &strategy, spec.tolerance.unwrap_or(1e-6))?;
            let text = format!(
                "{} e({}) = {}, e({}) = {}\nconverse: e(m^n) = {}, e(m^(n+1)) = {}, filtrations differ at n = {}\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.ideal,
                number(&r.e_ideal),
                r.closure,
                number(&r.e_closure),
                number(&r.converse.e_powers),
                number(&r.converse.e_shifted),
                r.converse.first_difference
            );
            Ok(report(task, &r, text, !r.pass))
        }
        Task::MultigradedDemo => {
            let mf = match spec.multifiltration()? {
                Some(mf) => mf,
                None => MultiFiltration::ceiling_norm(vec![1, 1])?,
            };
            let points = spec.points.clone().unwrap_or_else(standard_points);
            let strategy = match (&spec.strategy, budget) {
                (None, None) => Strategy::numeric(DEMO_BUDGET),
                _ => strategy,
            };
            let r = non_polynomial_witness(
                &mf,
                &points,
                spec.degree.unwrap_or(1),
                &strategy,
                spec.threshold.unwrap_or(DEFAULT_THRESHOLD),
                &[2, 3],
                spec.tolerance.unwrap_or(DEFAULT_HOMOGENEITY_TOLERANCE),
            )?;
            let mut text = String::new();
            for p in &r.points {
                let _ = write!(text, "P{:?} = {}", p.n, estimate(&p.estimate));
                if let Some(cf) = &p.closed_forms {
                    let _ = write!(text, "  [sqrt form {} ≈ {:.6}, ceiling form {}]", cf.sqrt, cf.sqrt_approx, cf.ceiling);
                }
                text.push('\n');
            }
            let _ = writeln!(
                text,
                "max residual of best homogeneous degree-{} fit: {:.4} (threshold {}) -> {}",
                r.d,
                r.max_residual,
                r.threshold,
                if r.witnessed { "not a polynomial" } else { "consistent with a polynomial" }
            );
            let _ = writeln!(text, "homogeneity under scaling: {}", if r.homogeneous { "holds" } else { "violated" });
            Ok(report(task, &r, text, !r.homogeneous))
        }
    }
}
