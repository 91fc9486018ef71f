//! Newton polyhedra `conv(gens) + R^d_{>=0}` of monomial ideals.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull::hull_volume;
use crate::ideal::{minimalize, Exponent, MonomialIdeal};
use crate::rational::Rational;

/// Half-space `normal · a >= offset` with a primitive nonnegative normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn holds(&self, a: &[u32]) -> bool {
        let lhs: i64 = self.normal.iter().zip(a).map(|(w, &x)| w * x as i64).sum();
        lhs >= self.offset
    }

    /// The coordinate half-spaces `a_i >= 0` bound every region; they are not listed.
    fn is_orthant_wall(&self) -> bool {
        self.offset == 0 && self.normal.iter().filter(|&&w| w != 0).count() == 1
    }
}

/// Facet description of a Newton polyhedron. The recession cone is always
/// the nonnegative orthant, so only the non-trivial facets are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonRegion {
    dim: usize,
    gens: Vec<Exponent>,
    facets: Vec<Facet>,
    bounds: Option<Vec<u32>>,
}

impl NewtonRegion {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facets with every normal coordinate positive; in the plane these are
    /// exactly the compact edges of the lower hull.
    pub fn bounded_facets(&self) -> Vec<&Facet> {
        self.facets.iter().filter(|f| f.normal.iter().all(|&w| w > 0)).collect()
    }

    pub fn contains(&self, a: &[u32]) -> bool {
        self.facets.iter().all(|f| f.holds(a))
    }

    /// Exact volume of the orthant minus the region, for `d <= 3`.
    pub fn covolume(&self) -> Result<Rational> {
        let bounds = self.bounds.as_ref().ok_or(Error::NotMPrimary)?;
        if self.dim > 3 {
            return Err(Error::DimensionUnsupported(self.dim));
        }
        // Region ∩ box is the hull of every generator with any subset of its
        // coordinates raised to the box bound.
        let mut pts = Vec::with_capacity(self.gens.len() << self.dim);
        for g in &self.gens {
            for mask in 0u32..(1 << self.dim) {
                let p: Vec<i64> = (0..self.dim)
                    .map(|i| if mask >> i & 1 == 1 { bounds[i] as i64 } else { g.coords()[i] as i64 })
                    .collect();
                pts.push(p);
            }
        }
        let box_volume: BigInt = bounds.iter().map(|&c| BigInt::from(c)).product();
        Ok(Rational::from_integer(box_volume) - hull_volume(&pts)?)
    }
}

/// Builds the facet description of `conv(gens) + R^d_{>=0}`.
///
/// Every facet is spanned by some generator `p` together with `d-1`
/// independent directions drawn from `{g - p}` and the coordinate rays, so
/// enumerating those choices and keeping the supporting hyperplanes is
/// complete.
pub fn newton_region(ideal: &MonomialIdeal) -> NewtonRegion {
    let d = ideal.dim();
    let gens: Vec<Vec<i64>> = ideal.gens().iter().map(|g| g.coords().iter().map(|&c| c as i64).collect()).collect();
    let mut found: BTreeSet<Facet> = BTreeSet::new();

    let n = gens.len();
    let mut chosen: Vec<usize> = Vec::new();
    for k in 1..=d.min(n) {
        for_each_subset(n, k, &mut chosen, 0, &mut |subset| {
            let base = &gens[subset[0]];
            let pt_dirs: Vec<Vec<i64>> =
                subset[1..].iter().map(|&j| gens[j].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            let mut rays = Vec::new();
            for_each_subset(d, d - k, &mut rays, 0, &mut |ray_set| {
                let mut dirs = pt_dirs.clone();
                for &axis in ray_set {
                    let mut e = vec![0; d];
                    e[axis] = 1;
                    dirs.push(e);
                }
                if let Some(normal) = normal_vector(&dirs, d) {
                    let offset: i64 = normal.iter().zip(base).map(|(w, x)| w * x).sum();
                    let supports = gens.iter().all(|g| normal.iter().zip(g).map(|(w, x)| w * x).sum::<i64>() >= offset);
                    if supports {
                        let facet = Facet { normal, offset };
                        if !facet.is_orthant_wall() {
                            found.insert(facet);
                        }
                    }
                }
            });
        });
    }

    NewtonRegion { dim: d, gens: ideal.gens().to_vec(), facets: found.into_iter().collect(), bounds: ideal.box_bounds() }
}

fn for_each_subset(n: usize, k: usize, cur: &mut Vec<usize>, start: usize, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    let need = k - cur.len();
    for i in start..=n.saturating_sub(need) {
        if i >= n {
            break;
        }
        cur.push(i);
        for_each_subset(n, k, cur, i + 1, f);
        cur.pop();
    }
}

/// Primitive nonnegative normal of the hyperplane spanned by `dirs`
/// (`d-1` vectors), or `None` if they are dependent or the normal has mixed
/// signs (such a hyperplane cannot support a region recessing along the orthant).
fn normal_vector(dirs: &[Vec<i64>], d: usize) -> Option<Vec<i64>> {
    debug_assert_eq!(dirs.len(), d - 1);
    let mut normal: Vec<i128> = Vec::with_capacity(d);
    for skip in 0..d {
        let minor: Vec<Vec<i128>> =
            dirs.iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &x)| x as i128).collect()).collect();
        let det = bareiss_det(minor);
        normal.push(if skip % 2 == 0 { det } else { -det });
    }
    if normal.iter().all(|&x| x == 0) {
        return None;
    }
    if normal.iter().all(|&x| x <= 0) {
        normal.iter_mut().for_each(|x| *x = -*x);
    }
    if normal.iter().any(|&x| x < 0) {
        return None;
    }
    let g = normal.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    Some(normal.into_iter().map(|x| (x / g) as i64).collect())
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

const CLOSURE_BOX_LIMIT: u64 = 20_000_000;

/// Integral closure: the ideal of all lattice points in the Newton region.
pub fn integral_closure(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    let region = newton_region(ideal);
    let d = ideal.dim();
    // Minimal generators of the closure never exceed the generators' maxima.
    let maxima: Vec<u32> = (0..d).map(|i| ideal.gens().iter().map(|g| g.coords()[i]).max().unwrap()).collect();
    let cells: u64 = maxima.iter().map(|&m| m as u64 + 1).product();
    if cells > CLOSURE_BOX_LIMIT {
        return Err(Error::BudgetExceeded(format!("integral closure box of {cells} cells")));
    }
    let mut raw: Vec<Exponent> = ideal.gens().to_vec();
    let mut point = vec![0u32; d];
    loop {
        if region.contains(&point) {
            raw.push(Exponent::new(point.clone()));
        }
        let mut axis = 0;
        loop {
            if axis == d {
                return minimalize(raw, d);
            }
            if point[axis] < maxima[axis] {
                point[axis] += 1;
                break;
            }
            point[axis] = 0;
            axis += 1;
        }
    }
}

/// `covolume(newton_region(I))`.
pub fn covolume(ideal: &MonomialIdeal) -> Result<Rational> {
    if !ideal.is_m_primary() {
        return Err(Error::NotMPrimary);
    }
    if ideal.dim() > 3 {
        return Err(Error::DimensionUnsupported(ideal.dim()));
    }
    newton_region(ideal).covolume()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ideal(dim: usize, rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_rows(dim, rows).unwrap()
    }

    #[test]
    fn region_examples() {
        let r = newton_region(&ideal(2, &[&[2, 0], &[0, 1]]));
        assert_eq!(r.facets(), &[Facet { normal: vec![1, 2], offset: 2 }]);
        assert!(newton_region(&MonomialIdeal::unit(2)).facets().is_empty());
        let r = newton_region(&ideal(2, &[&[3, 0], &[1, 1], &[0, 4]]));
        let bounded: Vec<Facet> = r.bounded_facets().into_iter().cloned().collect();
        assert_eq!(bounded, vec![Facet { normal: vec![1, 2], offset: 3 }, Facet { normal: vec![3, 1], offset: 4 }]);
    }

    #[test]
    fn non_primary_region_keeps_coordinate_walls() {
        let r = newton_region(&ideal(2, &[&[1, 1]]));
        assert_eq!(r.facets().len(), 2);
        assert!(r.contains(&[1, 5]));
        assert!(!r.contains(&[0, 5]));
        assert_eq!(r.covolume(), Err(Error::NotMPrimary));
    }

    #[test]
    fn covolume_examples() {
        assert_eq!(covolume(&ideal(2, &[&[2, 0], &[0, 1]])).unwrap(), int(1));
        assert_eq!(covolume(&MonomialIdeal::maximal(2)).unwrap(), ratio(1, 2));
        assert_eq!(covolume(&ideal(2, &[&[3, 0], &[1, 1], &[0, 4]])).unwrap(), ratio(7, 2));
        assert_eq!(covolume(&MonomialIdeal::maximal(3)).unwrap(), ratio(1, 6));
        assert_eq!(covolume(&MonomialIdeal::pure_powers(&[2, 3, 4])).unwrap(), int(4));
        assert_eq!(covolume(&MonomialIdeal::pure_powers(&[5])).unwrap(), int(5));
        assert_eq!(covolume(&MonomialIdeal::maximal(4)), Err(Error::DimensionUnsupported(4)));
    }

    #[test]
    fn closure_examples() {
        let c = integral_closure(&ideal(2, &[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(c, ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(integral_closure(&MonomialIdeal::maximal(2)).unwrap(), MonomialIdeal::maximal(2));
        let c = integral_closure(&ideal(2, &[&[3, 0], &[0, 3]])).unwrap();
        assert!(c.contains(&Exponent::new(vec![2, 1])).unwrap());
        assert!(c.contains(&Exponent::new(vec![1, 2])).unwrap());
        let c = integral_closure(&ideal(2, &[&[2, 0], &[0, 2]]).power(1)).unwrap();
        assert_eq!(c.gens().len(), 3);
        // (x^2, y^2)^2 closure is m^4-like: contains x^3 y and x y^3.
        let c = integral_closure(&ideal(2, &[&[4, 0], &[0, 4]])).unwrap();
        assert_eq!(c, MonomialIdeal::maximal(2).power(4));
    }

    #[test]
    fn closure_of_non_primary_ideal() {
        let i = ideal(2, &[&[2, 0], &[0, 2]]).product(&ideal(2, &[&[1, 1]])).unwrap();
        let c = integral_closure(&i).unwrap();
        assert!(c.contains(&Exponent::new(vec![2, 2])).unwrap());
        assert!(!c.is_m_primary());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        assert_eq!(bareiss_det(vec![vec![1, 1, 1], vec![1, 2, 4], vec![4, 2, 1]]), 3);
        assert_eq!(bareiss_det(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(bareiss_det(vec![vec![2, 4], vec![1, 2]]), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn primary(dim: usize, max_exp: u32) -> impl Strategy<Value = MonomialIdeal> {
            (
                prop::collection::vec(1..=max_exp, dim),
                prop::collection::vec(prop::collection::vec(0..=max_exp, dim), 0..5),
            )
                .prop_map(move |(pure, extra)| {
                    let mut raw: Vec<Exponent> =
                        pure.iter().enumerate().map(|(i, &c)| Exponent::pure(dim, i, c)).collect();
                    raw.extend(extra.into_iter().filter(|e| e.iter().any(|&c| c > 0)).map(Exponent::new));
                    minimalize(raw, dim).unwrap()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn closure_is_idempotent_and_extensive(i in (1usize..=3).prop_flat_map(|d| primary(d, 7))) {
                let c = integral_closure(&i).unwrap();
                prop_assert!(i.is_subset_of(&c).unwrap());
                prop_assert_eq!(integral_closure(&c).unwrap(), c.clone());
                let (ri, rc) = (newton_region(&i), newton_region(&c));
                prop_assert_eq!(ri.facets(), rc.facets());
            }

            #[test]
            fn generators_satisfy_every_facet(i in (2usize..=3).prop_flat_map(|d| primary(d, 9))) {
                let r = newton_region(&i);
                for g in i.gens() {
                    prop_assert!(r.contains(g.coords()));
                }
            }

            // A point outside the region has its floor outside the ideal, so the
            // unit cubes at standard monomials cover the complement.
            #[test]
            fn covolume_sandwich(i in (1usize..=3).prop_flat_map(|d| primary(d, 7))) {
                let cov = covolume(&i).unwrap();
                prop_assert!(cov > int(0));
                prop_assert!(cov <= int(i.colength().unwrap() as i64));
            }
        }
    }
}
