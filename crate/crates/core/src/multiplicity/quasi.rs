//! Quasi-polynomial form of `n ↦ λ(R/I(1)_{n_1}···I(r)_{n_r})` for
//! Noetherian filtrations, found by interpolation and checked on fresh samples.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::common_dim;
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::ideal::MonomialIdeal;
use crate::linalg;
use crate::multi::compositions;
use crate::rational::{self, Rational};

/// How far the interpolation start may move before giving up.
const MAX_START: u64 = 48;
/// Extra samples per residue class used to accept an interpolant.
const VALIDATION_SAMPLES: u64 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub powers: Vec<u64>,
    #[serde(with = "rational::serde_str")]
    pub coeff: Rational,
}

/// The polynomial valid on `n ≡ residue (mod period)` once every `n_j >= threshold`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClass {
    pub residue: Vec<u64>,
    pub threshold: u64,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPolynomial {
    pub arity: usize,
    pub period: u64,
    pub degree: usize,
    pub classes: Vec<ResidueClass>,
}

fn eval_terms(terms: &[Term], n: &[u64]) -> Rational {
    terms
        .iter()
        .map(|t| {
            let mono: num_bigint::BigInt =
                n.iter().zip(&t.powers).map(|(&x, &p)| num_traits::pow(num_bigint::BigInt::from(x), p as usize)).product();
            &t.coeff * Rational::from_integer(mono)
        })
        .sum()
}

impl QuasiPolynomial {
    pub fn class_of(&self, n: &[u64]) -> Option<&ResidueClass> {
        let residue: Vec<u64> = n.iter().map(|&x| x % self.period).collect();
        self.classes.iter().find(|c| c.residue == residue)
    }

    pub fn evaluate(&self, n: &[u64]) -> Result<Rational> {
        if n.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: n.len() });
        }
        let class = self.class_of(n).expect("every residue has a class");
        Ok(eval_terms(&class.terms, n))
    }

    /// Coefficients of total degree `degree` for one class, by exponent tuple.
    pub fn top_coefficients(&self, class: usize) -> Vec<(Vec<u64>, Rational)> {
        self.classes[class]
            .terms
            .iter()
            .filter(|t| t.powers.iter().sum::<u64>() == self.degree as u64)
            .map(|t| (t.powers.clone(), t.coeff.clone()))
            .collect()
    }
}

fn colength_at(fs: &[Filtration], n: &[u64]) -> Result<Rational> {
    let mut acc = MonomialIdeal::unit(fs[0].dim());
    for (f, &k) in fs.iter().zip(n) {
        acc = acc.product(&f.ideal_at(k)?)?;
    }
    Ok(Rational::from_integer(acc.colength()?.into()))
}

/// Exponent tuples of total degree `<= deg` in `r` variables.
fn all_powers(r: usize, deg: usize) -> Vec<Vec<u64>> {
    (0..=deg as u64).rev().flat_map(|t| compositions(r, t)).collect()
}

struct ClassFit {
    threshold: u64,
    coeffs: Vec<Rational>,
}

/// Interpolates at the points `α(k0 + β) + b`, `|β| <= deg`, then checks
/// the interpolant on points just beyond the grid.
fn fit_at(fs: &[Filtration], period: u64, residue: &[u64], k0: u64, powers: &[Vec<u64>], deg: usize) -> Result<Option<ClassFit>> {
    let r = residue.len();
    let to_n = |k: &[u64]| -> Vec<u64> { k.iter().zip(residue).map(|(&k, &b)| period * k + b).collect() };
    let nodes: Vec<Vec<u64>> = all_powers(r, deg)
        .into_iter()
        .map(|beta| to_n(&beta.iter().map(|&x| x + k0).collect::<Vec<_>>()))
        .collect();
    let matrix: linalg::Matrix =
        nodes.iter().map(|n| powers.iter().map(|p| eval_terms(&[Term { powers: p.clone(), coeff: rational::int(1) }], n)).collect()).collect();
    let values: Vec<Rational> = nodes.iter().map(|n| colength_at(fs, n)).collect::<Result<_>>()?;
    let Some(coeffs) = linalg::solve(&matrix, &values)? else {
        return Ok(None);
    };
    let terms: Vec<Term> = powers.iter().zip(&coeffs).map(|(p, c)| Term { powers: p.clone(), coeff: c.clone() }).collect();
    for t in 0..VALIDATION_SAMPLES {
        let k: Vec<u64> = (0..r as u64).map(|j| k0 + deg as u64 + 1 + t + j).collect();
        let n = to_n(&k);
        if eval_terms(&terms, &n) != colength_at(fs, &n)? {
            return Ok(None);
        }
    }
    Ok(Some(ClassFit { threshold: period * k0, coeffs }))
}

fn residues(r: usize, period: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out.into_iter().flat_map(|p: Vec<u64>| (0..period).map(move |b| {
            let mut q = p.clone();
            q.push(b);
            q
        })).collect();
    }
    out
}

/// Fits `λ(R/Π I(j)_{n_j})` as a quasi-polynomial with the given period.
///
/// Each residue class is interpolated at degree `d + 1` from the first start
/// whose interpolant survives validation; the start is then pushed `window`
/// further and the fit repeated. The degree-`d+1` part must vanish and the
/// degree-`d` part must agree across classes.
pub fn fit_quasi_polynomial(fs: &[Filtration], period: u64, window: u64) -> Result<QuasiPolynomial> {
    let d = common_dim(fs)?;
    let r = fs.len();
    if period == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    for (j, f) in fs.iter().enumerate() {
        let base = f.ideal_at(period)?;
        let mut power = base.clone();
        for i in 2..=4 {
            power = power.product(&base)?;
            if f.ideal_at(period * i)? != power {
                return Err(Error::InvalidFiltration(format!("period {period} is not a Noetherian scale of filtration {j}")));
            }
        }
    }
    let fit_deg = d + 1;
    let powers = all_powers(r, fit_deg);
    let classes: Vec<ResidueClass> = residues(r, period)
        .par_iter()
        .map(|b| {
            let mut start = None;
            for k0 in 1..=MAX_START {
                if fit_at(fs, period, b, k0, &powers, fit_deg)?.is_some() {
                    start = Some(k0);
                    break;
                }
            }
            let k0 = start.ok_or(Error::FitValidation)? + window;
            let fit = fit_at(fs, period, b, k0, &powers, fit_deg)?.ok_or(Error::FitValidation)?;
            let top_found = powers
                .iter()
                .zip(&fit.coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, _)| p.iter().sum::<u64>() as usize)
                .max()
                .unwrap_or(0);
            if top_found != d {
                return Err(Error::DegreeMismatch { expected: d, found: top_found });
            }
            let terms = powers
                .iter()
                .zip(fit.coeffs)
                .filter(|(p, c)| p.iter().sum::<u64>() as usize <= d && !c.is_zero())
                .map(|(p, c)| Term { powers: p.clone(), coeff: c })
                .collect();
            Ok(ResidueClass { residue: b.clone(), threshold: fit.threshold, terms })
        })
        .collect::<Result<_>>()?;
    let qp = QuasiPolynomial { arity: r, period, degree: d, classes };
    let reference = qp.top_coefficients(0);
    if (1..qp.classes.len()).any(|c| qp.top_coefficients(c) != reference) {
        return Err(Error::TopCoefficientDrift);
    }
    Ok(qp)
}
