//! Semigroups of a monomial filtration and the volumes of their bodies.
//!
//! With the monomial valuation every exponent is its own graded piece, so
//! `Γ_m = {a : x^a ∈ I_m, |a| <= βm}` and `Γ̂_m = {a : |a| <= βm}`.
//! The colength limit equals `Vol Δ(Γ̂) - Vol Δ(Γ)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::hull::hull_volume;
use crate::ideal::{Exponent, MembershipIndex};
use crate::multi::compositions;
use crate::multiplicity::{limit_normalized_colength, LimitEstimate, Strategy};
use crate::rational::{self, Number, Rational};

/// The valuation bound: `Σ a_i λ_i >= 2n` forces `|a| >= n` for weights in `(1, 2)`.
pub const VALUATION_SCALE: u64 = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupSample {
    pub dim: usize,
    pub level: u64,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub points: Vec<Exponent>,
}

fn layer_bound(beta: &Rational, m: u64) -> Result<u32> {
    if !beta.is_positive() {
        return Err(Error::InvalidArgument("beta must be positive".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("level must be positive".into()));
    }
    (beta * Rational::from_integer(m.into()))
        .floor()
        .to_integer()
        .to_u32()
        .ok_or_else(|| Error::BudgetExceeded("semigroup bound overflows".into()))
}

fn points_up_to(d: usize, bound: u32, mut keep: impl FnMut(&[u32]) -> bool) -> Vec<Exponent> {
    let mut out = Vec::new();
    for t in 0..=bound as u64 {
        for p in compositions(d, t) {
            let p: Vec<u32> = p.into_iter().map(|c| c as u32).collect();
            if keep(&p) {
                out.push(Exponent::new(p));
            }
        }
    }
    out
}

/// `Γ_m`: exponents in `I_m` of total degree at most `βm`.
pub fn semigroup_points(f: &Filtration, m: u64, beta: &Rational) -> Result<SemigroupSample> {
    let bound = layer_bound(beta, m)?;
    let ideal = f.ideal_at(m)?;
    let index = MembershipIndex::new(&ideal);
    let points = points_up_to(f.dim(), bound, |p| index.contains(p));
    Ok(SemigroupSample { dim: f.dim(), level: m, beta: beta.clone(), points })
}

/// `Γ̂_m`: every exponent of total degree at most `βm`.
pub fn full_semigroup_points(d: usize, m: u64, beta: &Rational) -> Result<SemigroupSample> {
    let bound = layer_bound(beta, m)?;
    Ok(SemigroupSample { dim: d, level: m, beta: beta.clone(), points: points_up_to(d, bound, |_| true) })
}

/// `conv(Γ_m / m)` as vertices and exact volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodyApproximation {
    pub level: u64,
    /// Candidate points of `Γ_m` (unscaled) containing every hull vertex.
    pub support: Vec<Exponent>,
    #[serde(with = "rational::serde_str")]
    pub volume: Rational,
}

impl BodyApproximation {
    /// Support points divided by the level.
    pub fn scaled_support(&self) -> Vec<Vec<Rational>> {
        let m = Rational::from_integer(self.level.into());
        self.support.iter().map(|p| p.coords().iter().map(|&c| Rational::from_integer(c.into()) / &m).collect()).collect()
    }
}

fn scaled_volume(points: &[Vec<i64>], d: usize, m: u64) -> Result<Rational> {
    let raw = hull_volume(points)?;
    Ok(raw / Rational::from_integer(num_traits::pow(BigInt::from(m), d)))
}

/// Exact `Vol conv(Γ_m / m)`.
///
/// A non-generator point below the top layer is the midpoint of two other
/// points of `Γ_m` (step down one axis, step up the same axis), so the hull
/// vertices are among the generators within the bound and the top layer.
pub fn body_volume(f: &Filtration, m: u64, beta: &Rational) -> Result<BodyApproximation> {
    let d = f.dim();
    if d > 3 {
        return Err(Error::DimensionUnsupported(d));
    }
    let bound = layer_bound(beta, m)?;
    let ideal = f.ideal_at(m)?;
    let index = MembershipIndex::new(&ideal);
    let mut support: Vec<Exponent> = ideal.gens().iter().filter(|g| g.degree() <= bound as u64).cloned().collect();
    for p in compositions(d, bound as u64) {
        let p: Vec<u32> = p.into_iter().map(|c| c as u32).collect();
        if index.contains(&p) && !ideal.gens().iter().any(|g| g.coords() == p.as_slice()) {
            support.push(Exponent::new(p));
        }
    }
    let pts: Vec<Vec<i64>> = support.iter().map(|p| p.coords().iter().map(|&c| c as i64).collect()).collect();
    let volume = scaled_volume(&pts, d, m)?;
    Ok(BodyApproximation { level: m, support, volume })
}

/// `Vol conv(Γ̂_m / m)`, the scaled simplex `{x >= 0, |x| <= ⌊βm⌋/m}`.
pub fn full_body_volume(d: usize, m: u64, beta: &Rational) -> Result<Rational> {
    let bound = layer_bound(beta, m)? as u64;
    Ok(Rational::new(num_traits::pow(BigInt::from(bound), d), rational::factorial(d) * num_traits::pow(BigInt::from(m), d)))
}

/// `β = 2c` with `c` the least exponent such that `m^c ⊆ I_1`.
pub fn admissible_beta(f: &Filtration) -> Result<Rational> {
    let i1 = f.ideal_at(1)?;
    let c = i1.max_standard_degree()?.map_or(0, |s| s + 1).max(1);
    Ok(Rational::from_integer((VALUATION_SCALE * c).into()))
}

/// Whether `Γ_{m1} + Γ_{m2} ⊆ Γ_{m1+m2}`; returns the first offending pair.
pub fn superadditivity_violation(
    f: &Filtration,
    m1: u64,
    m2: u64,
    beta: &Rational,
) -> Result<Option<(Exponent, Exponent)>> {
    let a = semigroup_points(f, m1, beta)?;
    let b = semigroup_points(f, m2, beta)?;
    let bound = layer_bound(beta, m1 + m2)? as u64;
    let target = f.ideal_at(m1 + m2)?;
    let index = MembershipIndex::new(&target);
    for p in &a.points {
        for q in &b.points {
            let s = p.add(q);
            if s.degree() > bound || !index.contains(s.coords()) {
                return Ok(Some((p.clone(), q.clone())));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub m: u64,
    #[serde(with = "rational::serde_str")]
    pub vol_hat: Rational,
    #[serde(with = "rational::serde_str")]
    pub vol_body: Rational,
    #[serde(with = "rational::serde_str")]
    pub difference: Rational,
    pub limit: Number,
    pub limit_exact: bool,
    pub gap: Number,
    pub relative_gap: f64,
    pub estimate: LimitEstimate,
}

/// Body-volume difference at level `m_max` against the colength limit.
/// The limit is exact when a Noetherian scale is available and numeric
/// (up to `m_max`) otherwise.
pub fn volume_limit_check(f: &Filtration, m_max: u64) -> Result<VolumeReport> {
    let beta = admissible_beta(f)?;
    let d = f.dim();
    let vol_hat = full_body_volume(d, m_max, &beta)?;
    let vol_body = body_volume(f, m_max, &beta)?.volume;
    let difference = &vol_hat - &vol_body;
    let estimate = match limit_normalized_colength(std::slice::from_ref(f), &[1], &Strategy::exact()) {
        Ok(e) => e,
        Err(Error::NotNoetherian(_)) => limit_normalized_colength(std::slice::from_ref(f), &[1], &Strategy::numeric(m_max))?,
        Err(e) => return Err(e),
    };
    let gap = (&difference - &estimate.value).abs();
    let relative_gap = if estimate.value.is_positive() { rational::to_f64(&(&gap / &estimate.value)) } else { 0.0 };
    Ok(VolumeReport {
        limit: Number::new(&estimate.value, estimate.exact),
        limit_exact: estimate.exact,
        gap: Number::new(&gap, estimate.exact),
        beta,
        m: m_max,
        vol_hat,
        vol_body,
        difference,
        relative_gap,
        estimate,
    })
}

/// `#Γ̂_m - #Γ_m = λ(R/I_m)` whenever every standard monomial of `I_m` has
/// degree at most `βm`.
pub fn count_difference(f: &Filtration, m: u64, beta: &Rational) -> Result<u64> {
    let hat = full_semigroup_points(f.dim(), m, beta)?.points.len() as u64;
    let body = semigroup_points(f, m, beta)?.points.len() as u64;
    Ok(hat - body)
}

/// `C(⌊βm⌋ + d, d)`, the size of `Γ̂_m`.
pub fn simplex_count(d: usize, m: u64, beta: &Rational) -> Result<u128> {
    let bound = layer_bound(beta, m)? as u64;
    Ok(rational::binomial(bound + d as u64, d as u64))
}
