//! Limits `P(n) = lim λ(R/I(1)_{mn_1}···I(r)_{mn_r}) / m^d` and the
//! multiplicities built from them.

mod quasi;
mod table;

pub use quasi::{fit_quasi_polynomial, QuasiPolynomial, ResidueClass, Term};
pub use table::{
    mixed_multiplicity_table, monomial_types, sample_points, sample_points_seeded, truncation_convergence,
    MixedTable, SamplePoints, TableEntry, TruncationReport, TruncationRow,
};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{detect_noetherian_scale, Filtration};
use crate::ideal::MonomialIdeal;
use crate::multi::{MultiFiltration, MultiKind};
use crate::rational::{self, Number, Rational};

/// Default cap on the power `m` used by [`hilbert_samuel_multiplicity`].
pub const DEFAULT_MAX_POWER: u64 = 64;

/// Consecutive equal `d`-th differences required before accepting a value.
const STABLE_WINDOW: usize = 3;

/// `e(I) = d!·lim λ(R/I^m)/m^d`, read off as the eventually constant
/// `d`-th finite difference of `m ↦ λ(R/I^m)` (with `λ(R/I^0) = 0`).
pub fn hilbert_samuel_multiplicity(ideal: &MonomialIdeal) -> Result<u64> {
    hilbert_samuel_multiplicity_with(ideal, DEFAULT_MAX_POWER)
}

pub fn hilbert_samuel_multiplicity_with(ideal: &MonomialIdeal, max_power: u64) -> Result<u64> {
    if !ideal.is_m_primary() {
        return Err(Error::NotMPrimary);
    }
    if ideal.is_unit() {
        return Ok(0);
    }
    let d = ideal.dim();
    let signs: Vec<i128> = (0..=d as u64)
        .map(|k| if k % 2 == 0 { 1 } else { -1 } * rational::binomial(d as u64, k) as i128)
        .collect();
    let mut lengths: Vec<i128> = vec![0];
    let mut power = MonomialIdeal::unit(d);
    let mut last: Option<i128> = None;
    let mut run = 0;
    for m in 1..=max_power as usize {
        power = power.product(ideal)?;
        lengths.push(power.colength()? as i128);
        if m < d {
            continue;
        }
        let diff: i128 = (0..=d).map(|k| signs[k] * lengths[m - k]).sum();
        run = if last == Some(diff) { run + 1 } else { 1 };
        last = Some(diff);
        if run == STABLE_WINDOW {
            return u64::try_from(diff).map_err(|_| Error::BudgetExceeded("negative difference".into()));
        }
    }
    Err(Error::BudgetExceeded(format!("finite differences did not stabilize within m <= {max_power}")))
}

/// Parameters of the exact Noetherian route.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExactConfig {
    /// One scale per filtration; overrides certification and detection.
    pub scales: Option<Vec<u64>>,
    pub detect_bound: u64,
    pub detect_depth: u64,
    pub max_power: u64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { scales: None, detect_bound: 12, detect_depth: 48, max_power: DEFAULT_MAX_POWER }
    }
}

/// Parameters of the numeric route: `m = start, 2·start, 4·start, ... <= max_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericConfig {
    pub start: u64,
    pub max_m: u64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig { start: 1, max_m: 1024 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    #[serde(rename = "exact_noetherian")]
    Exact(ExactConfig),
    Numeric(NumericConfig),
}

impl Strategy {
    pub fn exact() -> Self {
        Strategy::Exact(ExactConfig::default())
    }

    pub fn numeric(max_m: u64) -> Self {
        Strategy::Numeric(NumericConfig { start: 1, max_m })
    }
}

/// How a [`LimitEstimate`] was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// All indices zero: the limit is `0` by definition.
    Zero,
    /// `e(Π I(j)_{a n_j}) / (d!·a^d)`. `certified` is false when the scale
    /// came from finite detection rather than from the filtration family.
    ExactNoetherian { scale: u64, certified: bool },
    /// Last value of a doubling schedule; the error bound is heuristic.
    Numeric { start: u64, max_m: u64 },
}

/// A value of the limit function together with how much to trust it.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate {
    pub value: Rational,
    pub error_bound: Rational,
    pub exact: bool,
    pub provenance: Provenance,
    pub samples: Vec<(u64, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct EstimateRepr {
    value: Number,
    error_bound: Number,
    exact: bool,
    strategy: Provenance,
    samples: Vec<(u64, Number)>,
}

impl Serialize for LimitEstimate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EstimateRepr {
            value: Number::new(&self.value, self.exact),
            error_bound: Number::new(&self.error_bound, self.exact),
            exact: self.exact,
            strategy: self.provenance.clone(),
            samples: self.samples.iter().map(|(m, v)| (*m, Number::new(v, self.exact))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LimitEstimate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = EstimateRepr::deserialize(d)?;
        let conv = |n: &Number| n.to_rational().map_err(D::Error::custom);
        Ok(LimitEstimate {
            value: conv(&r.value)?,
            error_bound: conv(&r.error_bound)?,
            exact: r.exact,
            provenance: r.strategy,
            samples: r.samples.iter().map(|(m, v)| Ok((*m, conv(v)?))).collect::<std::result::Result<_, D::Error>>()?,
        })
    }
}

impl LimitEstimate {
    fn exact_value(value: Rational, provenance: Provenance) -> Self {
        LimitEstimate { value, error_bound: Rational::zero(), exact: true, provenance, samples: Vec::new() }
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.value)
    }
}

pub(crate) fn common_dim(fs: &[Filtration]) -> Result<usize> {
    let first = fs.first().ok_or(Error::EmptyGenerators)?;
    for f in fs {
        if f.dim() != first.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: f.dim() });
        }
    }
    Ok(first.dim())
}

fn pow_u64(base: u64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// `P(n)` for the product of `fs` scaled by `n`.
pub fn limit_normalized_colength(fs: &[Filtration], n: &[u64], strategy: &Strategy) -> Result<LimitEstimate> {
    let d = common_dim(fs)?;
    if n.len() != fs.len() {
        return Err(Error::ArityMismatch { expected: fs.len(), found: n.len() });
    }
    if n.iter().all(|&k| k == 0) {
        return Ok(LimitEstimate::exact_value(Rational::zero(), Provenance::Zero));
    }
    match strategy {
        Strategy::Exact(cfg) => exact_limit(fs, n, d, cfg),
        Strategy::Numeric(cfg) => numeric_limit(d, cfg, |m| {
            let mut acc = MonomialIdeal::unit(d);
            for (f, &k) in fs.iter().zip(n) {
                if k > 0 {
                    acc = acc.product(&f.ideal_at(m * k)?)?;
                }
            }
            Ok(acc)
        }),
    }
}

fn exact_limit(fs: &[Filtration], n: &[u64], d: usize, cfg: &ExactConfig) -> Result<LimitEstimate> {
    if let Some(s) = &cfg.scales {
        if s.len() != fs.len() {
            return Err(Error::ArityMismatch { expected: fs.len(), found: s.len() });
        }
        if s.contains(&0) {
            return Err(Error::InvalidArgument("scales must be positive".into()));
        }
    }
    let mut scale = 1u64;
    let mut certified = true;
    let mut models = Vec::new();
    for (j, (f, &k)) in fs.iter().zip(n).enumerate() {
        if k == 0 {
            continue;
        }
        let model = f.asymptotic_surrogate().unwrap_or_else(|| f.clone());
        let s = if let Some(s) = &cfg.scales {
            s[j]
        } else if let Some(s) = model.certified_scale() {
            s
        } else if let Some(s) = detect_noetherian_scale(&model, cfg.detect_bound, cfg.detect_depth) {
            certified = false;
            s
        } else {
            return Err(Error::NotNoetherian(j));
        };
        scale = rational::lcm(scale, s);
        models.push((model, k));
    }
    let mut product = MonomialIdeal::unit(d);
    for (model, k) in &models {
        product = product.product(&model.ideal_at(scale * k)?)?;
    }
    let e = hilbert_samuel_multiplicity_with(&product, cfg.max_power)?;
    let value = Rational::new(BigInt::from(e), rational::factorial(d) * pow_u64(scale, d));
    Ok(LimitEstimate::exact_value(value, Provenance::ExactNoetherian { scale, certified }))
}

fn numeric_limit(
    d: usize,
    cfg: &NumericConfig,
    ideal_at: impl Fn(u64) -> Result<MonomialIdeal>,
) -> Result<LimitEstimate> {
    if cfg.start == 0 || cfg.start > cfg.max_m {
        return Err(Error::InvalidArgument(format!("empty schedule: start {} max_m {}", cfg.start, cfg.max_m)));
    }
    let mut samples = Vec::new();
    let mut m = cfg.start;
    while m <= cfg.max_m {
        let len = ideal_at(m)?.colength()?;
        samples.push((m, Rational::new(BigInt::from(len), pow_u64(m, d))));
        m = m.checked_mul(2).unwrap_or(u64::MAX);
    }
    let value = samples.last().expect("nonempty schedule").1.clone();
    let error_bound = match samples.len() {
        1 => value.abs(),
        k => (&samples[k - 1].1 - &samples[k - 2].1).abs(),
    };
    Ok(LimitEstimate {
        value,
        error_bound,
        exact: false,
        provenance: Provenance::Numeric { start: cfg.start, max_m: cfg.max_m },
        samples,
    })
}

/// `P(n)` for a multigraded filtration. Products of single filtrations use
/// `strategy`; other kinds are evaluated numerically.
pub fn multi_limit(mf: &MultiFiltration, n: &[u64], strategy: &Strategy) -> Result<LimitEstimate> {
    if let MultiKind::Product(parts) = mf.kind() {
        return limit_normalized_colength(parts, n, strategy);
    }
    if n.len() != mf.arity() {
        return Err(Error::ArityMismatch { expected: mf.arity(), found: n.len() });
    }
    if n.iter().all(|&k| k == 0) {
        return Ok(LimitEstimate::exact_value(Rational::zero(), Provenance::Zero));
    }
    let cfg = match strategy {
        Strategy::Numeric(cfg) => cfg.clone(),
        Strategy::Exact(_) => NumericConfig::default(),
    };
    numeric_limit(mf.dim(), &cfg, |m| {
        let scaled: Vec<u64> = n.iter().map(|&k| k * m).collect();
        mf.ideal_at(&scaled)
    })
}

/// `e(F) = d!·P(1)` for a single filtration.
pub fn filtration_multiplicity(f: &Filtration, strategy: &Strategy) -> Result<LimitEstimate> {
    let mut est = limit_normalized_colength(std::slice::from_ref(f), &[1], strategy)?;
    let k = Rational::from_integer(rational::factorial(f.dim()));
    est.value *= &k;
    est.error_bound *= &k;
    for s in &mut est.samples {
        s.1 *= &k;
    }
    Ok(est)
}
