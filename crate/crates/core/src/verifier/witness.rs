//! Evidence that the limit function of a multigraded filtration need not be a polynomial.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::multi::{MultiFiltration, MultiKind};
use crate::multiplicity::{monomial_types, multi_limit, LimitEstimate, Strategy};
use crate::quadratic::QuadraticIrrational;
use crate::rational::{self, Number, Rational};

/// Default residual above which a fit is considered to have failed.
pub const DEFAULT_THRESHOLD: f64 = 0.05;
/// Default tolerance for `P(cn) = c·P(n)`.
pub const DEFAULT_HOMOGENEITY_TOLERANCE: f64 = 1e-2;

/// The eight points used for the ceiling-norm example.
pub fn standard_points() -> Vec<Vec<u64>> {
    vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![1, 2], vec![3, 4], vec![2, 3], vec![5, 12]]
}

/// Closed forms for `P` at a point of a ceiling-norm filtration: the value of
/// the defining limit, `√(Σ w n²)`, and its ceiling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForms {
    pub sqrt: QuadraticIrrational,
    pub sqrt_approx: f64,
    pub ceiling: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub n: Vec<u64>,
    pub estimate: LimitEstimate,
    pub fitted: Number,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closed_forms: Option<ClosedForms>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityCheck {
    pub n: Vec<u64>,
    pub c: u64,
    pub scaled: f64,
    pub expected: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitCoefficient {
    #[serde(rename = "type")]
    pub degrees: Vec<u64>,
    pub value: Number,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub d: usize,
    pub points: Vec<WitnessPoint>,
    pub fit: Vec<FitCoefficient>,
    pub max_residual: f64,
    pub threshold: f64,
    /// True when no homogeneous degree-`d` form fits within the threshold.
    pub witnessed: bool,
    pub homogeneity: Vec<HomogeneityCheck>,
    pub homogeneous: bool,
}

fn closed_forms(weights: &[u64], n: &[u64]) -> ClosedForms {
    let q: u64 = weights.iter().zip(n).map(|(w, x)| w * x * x).sum();
    let sqrt = QuadraticIrrational::sqrt_of(q);
    ClosedForms { sqrt_approx: sqrt.to_f64(), ceiling: sqrt.ceil().try_into().expect("fits u64"), sqrt }
}

fn mono(n: &[u64], powers: &[u64]) -> Rational {
    n.iter().zip(powers).fold(rational::int(1), |acc, (&x, &p)| acc * num_traits::pow(Rational::from_integer(x.into()), p as usize))
}

/// Fits a homogeneous degree-`d` form to `P` at `points` by exact least squares.
///
/// Homogeneity of `P` itself is probed by comparing `P(cn)` with `c^d·P(n)` for
/// the scalars in `scales`.
pub fn non_polynomial_witness(
    mf: &MultiFiltration,
    points: &[Vec<u64>],
    d: usize,
    strategy: &Strategy,
    threshold: f64,
    scales: &[u64],
    tolerance: f64,
) -> Result<WitnessReport> {
    let r = mf.arity();
    let types = monomial_types(r, d);
    let needed = types.len() + 3;
    if points.len() < needed {
        return Err(Error::InvalidArgument(format!("need at least {needed} points, got {}", points.len())));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != r {
            return Err(Error::ArityMismatch { expected: r, found: p.len() });
        }
        if points[..i].contains(p) {
            return Err(Error::InvalidArgument(format!("duplicate point {p:?}")));
        }
    }
    let estimates: Vec<LimitEstimate> = points.par_iter().map(|n| multi_limit(mf, n, strategy)).collect::<Result<_>>()?;
    let design: linalg::Matrix = points.iter().map(|n| types.iter().map(|t| mono(n, t)).collect()).collect();
    let values: Vec<Rational> = estimates.iter().map(|e| e.value.clone()).collect();
    let coeffs = linalg::least_squares(&design, &values)?
        .ok_or_else(|| Error::InvalidArgument("points do not determine a degree-d form".into()))?;
    let fitted = linalg::mat_vec(&design, &coeffs);
    let weights = match mf.kind() {
        MultiKind::CeilingNorm(w) => Some(w.clone()),
        _ => None,
    };
    let mut max_residual = Rational::zero();
    let mut out = Vec::with_capacity(points.len());
    for ((n, est), fit) in points.iter().zip(estimates).zip(fitted) {
        let res = (&fit - &est.value).abs();
        if res > max_residual {
            max_residual = res.clone();
        }
        out.push(WitnessPoint {
            n: n.clone(),
            fitted: Number::new(&fit, est.exact),
            residual: rational::to_f64(&res),
            closed_forms: weights.as_ref().map(|w| closed_forms(w, n)),
            estimate: est,
        });
    }
    let jobs: Vec<(usize, u64)> = (0..points.len()).flat_map(|i| scales.iter().map(move |&c| (i, c))).collect();
    let homogeneity: Vec<HomogeneityCheck> = jobs
        .par_iter()
        .map(|&(i, c)| {
            let scaled_point: Vec<u64> = points[i].iter().map(|&x| c * x).collect();
            let scaled = multi_limit(mf, &scaled_point, strategy)?.to_f64();
            let expected = (c as f64).powi(d as i32) * out[i].estimate.to_f64();
            Ok(HomogeneityCheck { n: points[i].clone(), c, scaled, expected, pass: (scaled - expected).abs() <= tolerance })
        })
        .collect::<Result<_>>()?;
    let max_residual = rational::to_f64(&max_residual);
    Ok(WitnessReport {
        d,
        fit: types.into_iter().zip(&coeffs).map(|(t, c)| FitCoefficient { degrees: t, value: Number::new(c, false) }).collect(),
        points: out,
        max_residual,
        threshold,
        witnessed: max_residual > threshold,
        homogeneous: homogeneity.iter().all(|h| h.pass),
        homogeneity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Filtration;
    use crate::ideal::MonomialIdeal;
    use crate::rational::int;

    fn ceiling_norm_report() -> WitnessReport {
        let mf = MultiFiltration::ceiling_norm(vec![1, 1]).unwrap();
        non_polynomial_witness(&mf, &standard_points(), 1, &Strategy::numeric(1 << 12), DEFAULT_THRESHOLD, &[2, 3], DEFAULT_HOMOGENEITY_TOLERANCE)
            .unwrap()
    }

    #[test]
    fn ceiling_norm_is_not_linear() {
        let r = ceiling_norm_report();
        assert_eq!(r.points[5].estimate.value, int(5));
        assert_eq!(r.points[0].estimate.value, int(1));
        assert_eq!(r.points[7].estimate.value, int(13));
        assert!(r.witnessed, "max residual {}", r.max_residual);
        assert!(r.homogeneous);
        let cf = r.points[2].closed_forms.as_ref().unwrap();
        assert_eq!(cf.sqrt, QuadraticIrrational::sqrt_of(2));
        assert_eq!(cf.ceiling, 2);
        assert!((r.points[2].estimate.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-3);
    }

    #[test]
    fn least_squares_oracle() {
        // Independent normal-equation solve in floating point.
        let pts = standard_points();
        let vals: Vec<f64> = pts.iter().map(|p| ((p[0] * p[0] + p[1] * p[1]) as f64).sqrt()).collect();
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (p, v) in pts.iter().zip(&vals) {
            let (x, y) = (p[0] as f64, p[1] as f64);
            a11 += x * x;
            a12 += x * y;
            a22 += y * y;
            b1 += x * v;
            b2 += y * v;
        }
        let det = a11 * a22 - a12 * a12;
        let (a, b) = ((b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det);
        let oracle = pts.iter().zip(&vals).map(|(p, v)| (a * p[0] as f64 + b * p[1] as f64 - v).abs()).fold(0.0, f64::max);
        let r = ceiling_norm_report();
        assert!((r.max_residual - oracle).abs() < 1e-2, "{} vs {oracle}", r.max_residual);
        assert!(oracle > 0.05);
    }

    #[test]
    fn product_filtration_fits_exactly() {
        let m = MonomialIdeal::maximal(1);
        let mf = MultiFiltration::product(vec![Filtration::power(m.clone()).unwrap(), Filtration::power(m).unwrap()]).unwrap();
        let r = non_polynomial_witness(&mf, &standard_points(), 1, &Strategy::exact(), DEFAULT_THRESHOLD, &[2], 0.0).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert!(!r.witnessed && r.homogeneous);
        assert!(r.points[0].closed_forms.is_none());
    }

    #[test]
    fn too_few_points() {
        let mf = MultiFiltration::ceiling_norm(vec![1, 1]).unwrap();
        let pts = &standard_points()[..4];
        assert!(matches!(
            non_polynomial_witness(&mf, pts, 1, &Strategy::numeric(64), 0.05, &[], 0.0),
            Err(Error::InvalidArgument(_))
        ));
        let dup = vec![vec![1, 0]; 5];
        assert!(non_polynomial_witness(&mf, &dup, 1, &Strategy::numeric(64), 0.05, &[], 0.0).is_err());
    }
}
