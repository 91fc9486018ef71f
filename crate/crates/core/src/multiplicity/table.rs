//! Mixed multiplicities: coefficients of the homogeneous limit polynomial `G`.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{common_dim, limit_normalized_colength, ExactConfig, LimitEstimate, Strategy};
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::linalg::{self, Matrix};
use crate::multi::compositions;
use crate::rational::{self, Number, Rational};

/// Resampling budget for [`sample_points`].
const SAMPLE_RETRIES: usize = 256;

/// Degree-`d` exponent tuples in `r` variables, lexicographically descending:
/// `(2,0), (1,1), (0,2)` for `r = d = 2`. This fixes the column order of `B`.
pub fn monomial_types(r: usize, d: usize) -> Vec<Vec<u64>> {
    compositions(r, d as u64)
}

/// Points `n(1..g)` whose degree-`d` monomial matrix `B` is invertible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePoints {
    pub points: Vec<Vec<u64>>,
    #[serde(with = "matrix_str")]
    pub matrix: Matrix,
    #[serde(with = "matrix_str")]
    pub inverse: Matrix,
}

fn monomial_value(n: &[u64], powers: &[u64]) -> Rational {
    let v = n.iter().zip(powers).fold(BigInt::from(1), |acc, (&x, &p)| acc * num_traits::pow(BigInt::from(x), p as usize));
    Rational::from_integer(v)
}

fn evaluation_matrix(points: &[Vec<u64>], types: &[Vec<u64>]) -> Matrix {
    points.iter().map(|n| types.iter().map(|t| monomial_value(n, t)).collect()).collect()
}

/// Deterministic choice: the grid `(1, 1 + β)` with `β ∈ N^{r-1}`, `|β| <= d`.
///
/// A degree-`d` form is determined by its restriction to `n_1 = 1`, which is
/// an arbitrary polynomial of degree `<= d` in the other coordinates, and the
/// grid is unisolvent for those. Should the exact determinant ever vanish,
/// points are redrawn from `[1, 2g]^r` with a seeded generator.
pub fn sample_points(r: usize, d: usize) -> Result<SamplePoints> {
    sample_points_seeded(r, d, 0)
}

pub fn sample_points_seeded(r: usize, d: usize, seed: u64) -> Result<SamplePoints> {
    if r == 0 || d == 0 {
        return Err(Error::InvalidArgument("sample points need r, d >= 1".into()));
    }
    let types = monomial_types(r, d);
    let g = types.len();
    let mut grid: Vec<Vec<u64>> = Vec::with_capacity(g);
    if r == 1 {
        grid.push(vec![1]);
    } else {
        for t in 0..=d as u64 {
            for beta in compositions(r - 1, t) {
                let mut p = vec![1];
                p.extend(beta.iter().map(|b| b + 1));
                grid.push(p);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidate = grid;
    for _ in 0..SAMPLE_RETRIES {
        let matrix = evaluation_matrix(&candidate, &types);
        if let Some(inverse) = linalg::inverse(&matrix)? {
            return Ok(SamplePoints { points: candidate, matrix, inverse });
        }
        candidate = (0..g).map(|_| (0..r).map(|_| rng.gen_range(1..=2 * g as u64)).collect()).collect();
    }
    Err(Error::ExhaustedRetries(SAMPLE_RETRIES))
}

/// One mixed multiplicity `e(I(1)^{[d_1]}, ..., I(r)^{[d_r]})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub degrees: Vec<u64>,
    pub value: Rational,
    pub error_bound: Rational,
    pub exact: bool,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    #[serde(rename = "type")]
    degrees: Vec<u64>,
    value: Number,
    error_bound: Number,
    exact: bool,
}

impl Serialize for TableEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EntryRepr {
            degrees: self.degrees.clone(),
            value: Number::new(&self.value, self.exact),
            error_bound: Number::new(&self.error_bound, self.exact),
            exact: self.exact,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TableEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = EntryRepr::deserialize(d)?;
        Ok(TableEntry {
            degrees: r.degrees,
            value: r.value.to_rational().map_err(D::Error::custom)?,
            error_bound: r.error_bound.to_rational().map_err(D::Error::custom)?,
            exact: r.exact,
        })
    }
}

/// All mixed multiplicities of `r` filtrations, with the evaluation data
/// that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedTable {
    pub d: usize,
    pub r: usize,
    pub entries: Vec<TableEntry>,
    pub exact: bool,
    pub points: Vec<Vec<u64>>,
    #[serde(with = "matrix_str")]
    pub inverse: Matrix,
    pub samples: Vec<LimitEstimate>,
    pub strategy: Strategy,
}

fn factorial_product(degrees: &[u64]) -> Rational {
    Rational::from_integer(degrees.iter().map(|&k| rational::factorial(k as usize)).product())
}

impl MixedTable {
    pub fn entry(&self, degrees: &[u64]) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.degrees == degrees)
    }

    pub fn value(&self, degrees: &[u64]) -> Option<&Rational> {
        self.entry(degrees).map(|e| &e.value)
    }

    /// `G(n) = Σ e^{[d]} / (d_1!···d_r!) · n^d`.
    pub fn evaluate(&self, n: &[u64]) -> Rational {
        self.entries.iter().map(|e| &e.value / factorial_product(&e.degrees) * monomial_value(n, &e.degrees)).sum()
    }
}

/// Evaluates `G` at the sample points (in parallel) and solves for its
/// coefficients.
pub fn mixed_multiplicity_table(fs: &[Filtration], strategy: &Strategy) -> Result<MixedTable> {
    let d = common_dim(fs)?;
    let r = fs.len();
    let sp = sample_points(r, d)?;
    let samples: Vec<LimitEstimate> = sp
        .points
        .par_iter()
        .map(|n| limit_normalized_colength(fs, n, strategy))
        .collect::<Result<_>>()?;
    let b: Vec<Rational> = samples.iter().map(|s| s.value.clone()).collect();
    let errs: Vec<Rational> = samples.iter().map(|s| s.error_bound.clone()).collect();
    let coeffs = linalg::mat_vec(&sp.inverse, &b);
    let abs_inv: Matrix = sp.inverse.iter().map(|row| row.iter().map(|x| x.abs()).collect()).collect();
    let coeff_errs = linalg::mat_vec(&abs_inv, &errs);
    let exact = samples.iter().all(|s| s.exact);
    let entries = monomial_types(r, d)
        .into_iter()
        .zip(coeffs.into_iter().zip(coeff_errs))
        .map(|(degrees, (a, err))| {
            let k = factorial_product(&degrees);
            TableEntry { value: a * &k, error_bound: err * &k, exact, degrees }
        })
        .collect();
    Ok(MixedTable {
        d,
        r,
        entries,
        exact,
        points: sp.points,
        inverse: sp.inverse,
        samples,
        strategy: strategy.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub level: u64,
    #[serde(with = "vec_str")]
    pub values: Vec<Rational>,
}

/// Mixed multiplicities of successive truncations, with successive deltas.
/// No convergence rate is claimed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub targets: Vec<Vec<u64>>,
    pub rows: Vec<TruncationRow>,
    pub deltas: Vec<TruncationRow>,
}

impl TruncationReport {
    /// The sequence for one target across the schedule.
    pub fn sequence(&self, target: usize) -> Vec<Rational> {
        self.rows.iter().map(|row| row.values[target].clone()).collect()
    }
}

pub fn truncation_convergence(
    fs: &[Filtration],
    schedule: &[u64],
    targets: &[Vec<u64>],
    config: &ExactConfig,
) -> Result<TruncationReport> {
    let d = common_dim(fs)?;
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] == 0 {
        return Err(Error::InvalidArgument("schedule must be nonempty, positive and increasing".into()));
    }
    for t in targets {
        if t.len() != fs.len() {
            return Err(Error::ArityMismatch { expected: fs.len(), found: t.len() });
        }
        if t.iter().sum::<u64>() != d as u64 {
            return Err(Error::DegreeMismatch { expected: d, found: t.iter().sum::<u64>() as usize });
        }
    }
    let strategy = Strategy::Exact(ExactConfig { scales: None, ..config.clone() });
    let rows: Vec<TruncationRow> = schedule
        .par_iter()
        .map(|&a| {
            let truncated: Vec<Filtration> = fs.iter().map(|f| f.truncate(a)).collect::<Result<_>>()?;
            let table = mixed_multiplicity_table(&truncated, &strategy)?;
            let values = targets.iter().map(|t| table.value(t).cloned().expect("target type")).collect();
            Ok(TruncationRow { level: a, values })
        })
        .collect::<Result<_>>()?;
    let deltas = rows
        .windows(2)
        .map(|w| TruncationRow {
            level: w[1].level,
            values: w[1].values.iter().zip(&w[0].values).map(|(x, y)| x - y).collect(),
        })
        .collect();
    Ok(TruncationReport { targets: targets.to_vec(), rows, deltas })
}

pub(crate) mod vec_str {
    use crate::rational::{self, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rational::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| rational::parse(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod matrix_str {
    use crate::linalg::Matrix;
    use crate::rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|row| row.iter().map(rational::to_string).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|row| row.iter().map(|x| rational::parse(x).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}
