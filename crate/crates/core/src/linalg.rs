//! Dense exact linear algebra over `Q`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

fn check_square(a: &Matrix) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    Ok(n)
}

/// Gaussian elimination on `[a | b]`; returns `None` when `a` is singular.
fn eliminate(a: &Matrix, b: &Matrix) -> Result<Option<(Rational, Matrix)>> {
    let n = check_square(a)?;
    let m = b.first().map_or(0, |r| r.len());
    let mut w: Matrix = a.iter().zip(b).map(|(r, s)| r.iter().chain(s).cloned().collect()).collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !w[r][col].is_zero()) else {
            return Ok(None);
        };
        if piv != col {
            w.swap(piv, col);
            det = -det;
        }
        let p = w[col][col].clone();
        det *= &p;
        for x in w[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !w[r][col].is_zero() {
                let f = w[r][col].clone();
                for c in col..n + m {
                    let delta = &f * &w[col][c];
                    w[r][c] -= delta;
                }
            }
        }
    }
    Ok(Some((det, w.into_iter().map(|r| r[n..].to_vec()).collect())))
}

pub fn det(a: &Matrix) -> Result<Rational> {
    let n = check_square(a)?;
    Ok(eliminate(a, &vec![Vec::new(); n])?.map_or_else(Rational::zero, |(d, _)| d))
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

/// `a⁻¹`, or `None` if singular.
pub fn inverse(a: &Matrix) -> Result<Option<Matrix>> {
    let n = check_square(a)?;
    Ok(eliminate(a, &identity(n))?.map(|(_, inv)| inv))
}

/// The unique `x` with `a x = b`, or `None` if `a` is singular.
pub fn solve(a: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let col: Matrix = b.iter().map(|x| vec![x.clone()]).collect();
    Ok(eliminate(a, &col)?.map(|(_, x)| x.into_iter().map(|mut r| r.remove(0)).collect()))
}

pub fn mat_vec(a: &Matrix, x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// Exact least squares via the normal equations `AᵀA x = Aᵀb`.
/// `None` when the columns of `a` are dependent.
pub fn least_squares(a: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let k = a.first().map_or(0, |r| r.len());
    let mut ata = vec![vec![Rational::zero(); k]; k];
    let mut atb = vec![Rational::zero(); k];
    for (row, y) in a.iter().zip(b) {
        for i in 0..k {
            atb[i] += &row[i] * y;
            for j in 0..k {
                ata[i][j] += &row[i] * &row[j];
            }
        }
    }
    solve(&ata, &atb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[1, 1, 1], &[1, 2, 4], &[4, 2, 1]]);
        assert_eq!(det(&a).unwrap(), int(3));
        let inv = inverse(&a).unwrap().unwrap();
        for (i, row) in a.iter().enumerate() {
            for j in 0..3 {
                let e: Rational = row.iter().zip(&inv).map(|(x, r)| x * &r[j]).sum();
                assert_eq!(e, if i == j { int(1) } else { int(0) });
            }
        }
        assert_eq!(det(&m(&[&[2, 4], &[1, 2]])).unwrap(), int(0));
        assert!(inverse(&m(&[&[2, 4], &[1, 2]])).unwrap().is_none());
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
    }

    #[test]
    fn solve_and_fit() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(solve(&a, &[int(3), int(5)]).unwrap().unwrap(), vec![ratio(4, 5), ratio(7, 5)]);
        // Line through (0,0), (1,1), (2,1): slope 1/2, intercept 1/6.
        let design = m(&[&[0, 1], &[1, 1], &[2, 1]]);
        let fit = least_squares(&design, &[int(0), int(1), int(1)]).unwrap().unwrap();
        assert_eq!(fit, vec![ratio(1, 2), ratio(1, 6)]);
    }
}
