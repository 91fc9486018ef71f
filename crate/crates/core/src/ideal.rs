//! Monomial ideals of `k[[x_1, ..., x_d]]` and staircase arithmetic.
//!
//! An ideal is stored as its minimal generating set: a lexicographically
//! sorted antichain of exponent vectors. Because the representation is
//! canonical, structural equality is ideal equality.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector `a` of the monomial `x^a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(coords: Vec<u32>) -> Self {
        Exponent(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Exponent(vec![0; dim])
    }

    /// `c * e_axis`.
    pub fn pure(dim: usize, axis: usize, c: u32) -> Self {
        let mut v = vec![0; dim];
        v[axis] = c;
        Exponent(v)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        leq(&self.0, &other.0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

#[inline]
fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A nonzero monomial ideal, stored as its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IdealRepr", into = "IdealRepr")]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<Exponent>,
}

#[derive(Serialize, Deserialize)]
struct IdealRepr {
    dim: usize,
    gens: Vec<Vec<u32>>,
}

impl TryFrom<IdealRepr> for MonomialIdeal {
    type Error = Error;

    fn try_from(r: IdealRepr) -> Result<Self> {
        if r.dim == 0 {
            return Err(Error::InvalidArgument("ideal dimension must be positive".into()));
        }
        minimalize(r.gens.into_iter().map(Exponent).collect(), r.dim)
    }
}

impl From<MonomialIdeal> for IdealRepr {
    fn from(i: MonomialIdeal) -> Self {
        IdealRepr { dim: i.dim, gens: i.gens.into_iter().map(|g| g.0).collect() }
    }
}

/// Minimal elements of `raw` under componentwise order.
pub fn minimalize(raw: Vec<Exponent>, dim: usize) -> Result<MonomialIdeal> {
    if raw.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if let Some(bad) = raw.iter().find(|g| g.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
    }
    Ok(MonomialIdeal { dim, gens: antichain(raw) })
}

// Sorted lexicographically, any divisor of g precedes g, so one pass against
// the already-kept elements suffices.
fn antichain(mut raw: Vec<Exponent>) -> Vec<Exponent> {
    raw.sort_unstable();
    raw.dedup();
    let dim = raw[0].dim();
    if dim == 1 {
        raw.truncate(1);
        return raw;
    }
    if dim == 2 {
        let mut kept: Vec<Exponent> = Vec::new();
        let mut best = u32::MAX;
        for g in raw {
            if g.0[1] < best {
                best = g.0[1];
                kept.push(g);
            }
        }
        return kept;
    }
    let mut kept: Vec<Exponent> = Vec::with_capacity(raw.len());
    for g in raw {
        if !kept.iter().any(|k| leq(&k.0, &g.0)) {
            kept.push(g);
        }
    }
    kept
}

impl MonomialIdeal {
    /// The unit ideal `R`, generated by `x^0`.
    pub fn unit(dim: usize) -> Self {
        MonomialIdeal { dim, gens: vec![Exponent::zero(dim)] }
    }

    /// The maximal ideal `(x_1, ..., x_d)`.
    pub fn maximal(dim: usize) -> Self {
        let gens = (0..dim).map(|i| Exponent::pure(dim, i, 1)).collect();
        MonomialIdeal { dim, gens: antichain(gens) }
    }

    /// Convenience constructor from coordinate rows.
    pub fn from_rows(dim: usize, rows: &[&[u32]]) -> Result<Self> {
        minimalize(rows.iter().map(|r| Exponent(r.to_vec())).collect(), dim)
    }

    /// `(x_1^{c_1}, ..., x_d^{c_d})`.
    pub fn pure_powers(exps: &[u32]) -> Self {
        let dim = exps.len();
        let gens = exps.iter().enumerate().map(|(i, &c)| Exponent::pure(dim, i, c)).collect();
        MonomialIdeal { dim, gens: antichain(gens) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].0.iter().all(|&c| c == 0)
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other });
        }
        Ok(())
    }

    /// Ideal generated by all pairwise sums of generators.
    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other.dim)?;
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let mut raw = Vec::with_capacity(self.gens.len() * other.gens.len());
        for g in &self.gens {
            for h in &other.gens {
                raw.push(g.add(h));
            }
        }
        Ok(MonomialIdeal { dim: self.dim, gens: antichain(raw) })
    }

    /// `I^k` by iterated multiplication; `I^0` is the unit ideal.
    pub fn power(&self, k: u64) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.dim);
        for _ in 0..k {
            acc = acc.product(self).expect("same dimension");
        }
        acc
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other.dim)?;
        let raw = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(MonomialIdeal { dim: self.dim, gens: antichain(raw) })
    }

    pub fn contains(&self, a: &Exponent) -> Result<bool> {
        self.check_dim(a.dim())?;
        Ok(self.gens.iter().any(|g| g.divides(a)))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> Result<bool> {
        self.check_dim(other.dim)?;
        let index = MembershipIndex::new(other);
        Ok(self.gens.iter().all(|g| index.contains(g.coords())))
    }

    /// Exponent of the pure power `x_axis^c` among the generators, if any.
    pub fn pure_power(&self, axis: usize) -> Option<u32> {
        self.gens
            .iter()
            .filter(|g| g.0.iter().enumerate().all(|(i, &c)| i == axis || c == 0))
            .map(|g| g.0[axis])
            .min()
    }

    /// Pure-power exponents `c_i` along every axis; `None` if not m-primary.
    pub fn box_bounds(&self) -> Option<Vec<u32>> {
        (0..self.dim).map(|i| self.pure_power(i)).collect()
    }

    pub fn is_m_primary(&self) -> bool {
        self.is_unit() || self.box_bounds().is_some()
    }

    /// Number of standard monomials, `λ(R/I)`.
    pub fn colength(&self) -> Result<u64> {
        if !self.is_m_primary() {
            return Err(Error::NotMPrimary);
        }
        let pts: Vec<&[u32]> = self.gens.iter().map(|g| g.coords()).collect();
        Ok(count_standard(&pts))
    }

    /// Largest total degree of a standard monomial, or `None` for the unit ideal.
    ///
    /// `m^c ⊆ I` holds exactly for `c` greater than this value.
    pub fn max_standard_degree(&self) -> Result<Option<u64>> {
        let bounds = self.box_bounds().ok_or(Error::NotMPrimary)?;
        if self.is_unit() {
            return Ok(None);
        }
        let index = MembershipIndex::new(self);
        let mut best = 0u64;
        let mut point = vec![0u32; self.dim];
        for_each_in_box(&bounds, &mut point, 0, &mut |p| {
            if !index.contains(p) {
                best = best.max(p.iter().map(|&c| c as u64).sum());
            }
        });
        Ok(Some(best))
    }
}

fn for_each_in_box(bounds: &[u32], point: &mut Vec<u32>, axis: usize, f: &mut impl FnMut(&[u32])) {
    if axis == bounds.len() {
        f(point);
        return;
    }
    for v in 0..bounds[axis] {
        point[axis] = v;
        for_each_in_box(bounds, point, axis + 1, f);
    }
    point[axis] = 0;
}

/// Counts lattice points of `N^k` dominating none of `pts`.
///
/// Slices along the first axis only change at generator coordinates, so each
/// constant run of slices is counted once and multiplied by its length.
fn count_standard(pts: &[&[u32]]) -> u64 {
    let k = pts[0].len();
    match k {
        1 => pts.iter().map(|p| p[0] as u64).min().unwrap(),
        2 => count_standard_2d(pts),
        _ => {
            let extent = pts
                .iter()
                .filter(|p| p[1..].iter().all(|&c| c == 0))
                .map(|p| p[0])
                .min()
                .expect("m-primary slice");
            let mut firsts: Vec<u32> = pts.iter().map(|p| p[0]).filter(|&t| t < extent).collect();
            firsts.sort_unstable();
            firsts.dedup();
            let mut total = 0u64;
            for (i, &t) in firsts.iter().enumerate() {
                let next = firsts.get(i + 1).copied().unwrap_or(extent).min(extent);
                let slice: Vec<&[u32]> = pts.iter().filter(|p| p[0] <= t).map(|p| &p[1..]).collect();
                total += (next - t) as u64 * count_standard(&slice);
            }
            total
        }
    }
}

fn count_standard_2d(pts: &[&[u32]]) -> u64 {
    let mut sorted: Vec<(u32, u32)> = pts.iter().map(|p| (p[0], p[1])).collect();
    sorted.sort_unstable();
    let mut total = 0u64;
    let mut height = u32::MAX;
    let mut column = 0u32;
    for (u, v) in sorted {
        if height == 0 {
            break;
        }
        if u > column {
            total += (u - column) as u64 * height as u64;
            column = u;
        }
        height = height.min(v);
    }
    total
}

/// Constant-time membership for m-primary ideals.
///
/// Stores, for each point of the box spanned by the first `d-1` pure powers,
/// the least last coordinate that lands in the ideal.
pub struct MembershipIndex<'a> {
    ideal: &'a MonomialIdeal,
    bounds: Vec<u32>,
    heights: Option<Vec<u32>>,
}

const INDEX_CELL_LIMIT: u64 = 1 << 22;

impl<'a> MembershipIndex<'a> {
    pub fn new(ideal: &'a MonomialIdeal) -> Self {
        let d = ideal.dim;
        let bounds = match ideal.box_bounds() {
            Some(b) if d >= 2 => b,
            _ => return MembershipIndex { ideal, bounds: Vec::new(), heights: None },
        };
        let head = &bounds[..d - 1];
        let cells: u64 = head.iter().map(|&c| c as u64).product();
        if cells > INDEX_CELL_LIMIT || cells == 0 {
            return MembershipIndex { ideal, bounds, heights: None };
        }
        let mut heights = vec![u32::MAX; cells as usize];
        for g in &ideal.gens {
            let c = g.coords();
            if c[..d - 1].iter().zip(head).all(|(x, b)| x < b) {
                let idx = flat_index(&c[..d - 1], head);
                heights[idx] = heights[idx].min(c[d - 1]);
            }
        }
        // Prefix minima along each head axis.
        let mut stride = 1usize;
        for &b in head.iter().rev() {
            let b = b as usize;
            for idx in 0..heights.len() {
                if (idx / stride) % b != 0 {
                    let prev = heights[idx - stride];
                    if prev < heights[idx] {
                        heights[idx] = prev;
                    }
                }
            }
            stride *= b;
        }
        MembershipIndex { ideal, bounds, heights: Some(heights) }
    }

    pub fn contains(&self, a: &[u32]) -> bool {
        match &self.heights {
            None => self.ideal.gens.iter().any(|g| leq(g.coords(), a)),
            Some(h) => {
                let d = a.len();
                let head = &self.bounds[..d - 1];
                if a[..d - 1].iter().zip(head).any(|(x, b)| x >= b) {
                    return true;
                }
                a[d - 1] >= h[flat_index(&a[..d - 1], head)]
            }
        }
    }
}

fn flat_index(a: &[u32], bounds: &[u32]) -> usize {
    a.iter().zip(bounds).fold(0usize, |acc, (&x, &b)| acc * b as usize + x as usize)
}

/// Whether `I·J ⊆ K`, checked on pairwise generator sums.
pub fn product_contained_in(i: &MonomialIdeal, j: &MonomialIdeal, k: &MonomialIdeal) -> Result<bool> {
    i.check_dim(j.dim)?;
    i.check_dim(k.dim)?;
    let index = MembershipIndex::new(k);
    let mut buf = vec![0u32; i.dim];
    for g in &i.gens {
        for h in &j.gens {
            for (t, (a, b)) in buf.iter_mut().zip(g.coords().iter().zip(h.coords())) {
                *t = a + b;
            }
            if !index.contains(&buf) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = if self.dim <= 3 {
            ["x", "y", "z"][..self.dim].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=self.dim).map(|i| format!("x{i}")).collect()
        };
        write!(f, "(")?;
        for (n, g) in self.gens.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            let mut parts = Vec::new();
            for (c, name) in g.coords().iter().zip(&names) {
                match c {
                    0 => {}
                    1 => parts.push(name.clone()),
                    _ => parts.push(format!("{name}^{c}")),
                }
            }
            if parts.is_empty() {
                write!(f, "1")?;
            } else {
                write!(f, "{}", parts.join("*"))?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(dim: usize, rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_rows(dim, rows).unwrap()
    }

    fn gens(i: &MonomialIdeal) -> Vec<Vec<u32>> {
        i.gens().iter().map(|g| g.coords().to_vec()).collect()
    }

    /// Box scan with no pruning.
    fn brute_colength(i: &MonomialIdeal) -> u64 {
        let bounds = i.box_bounds().unwrap();
        let mut n = 0;
        let mut p = vec![0; i.dim()];
        for_each_in_box(&bounds, &mut p, 0, &mut |a| {
            if !i.gens().iter().any(|g| leq(g.coords(), a)) {
                n += 1;
            }
        });
        n
    }

    #[test]
    fn minimalize_examples() {
        let i = ideal(2, &[&[2, 0], &[3, 0], &[0, 1]]);
        assert_eq!(gens(&i), vec![vec![0, 1], vec![2, 0]]);
        let unit = ideal(2, &[&[0, 0], &[5, 5]]);
        assert!(unit.is_unit());
        let i = ideal(2, &[&[3, 0], &[1, 1], &[2, 3], &[0, 4]]);
        assert_eq!(gens(&i), vec![vec![0, 4], vec![1, 1], vec![3, 0]]);
    }

    #[test]
    fn minimalize_errors() {
        assert_eq!(minimalize(vec![], 2), Err(Error::EmptyGenerators));
        let mixed = vec![Exponent::new(vec![1, 0]), Exponent::new(vec![1])];
        assert!(matches!(minimalize(mixed, 2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn product_sum_and_powers() {
        let i = ideal(2, &[&[2, 0], &[0, 1]]);
        let j = ideal(2, &[&[1, 0], &[0, 3]]);
        assert_eq!(i.product(&j).unwrap(), ideal(2, &[&[3, 0], &[1, 1], &[0, 4]]));
        assert_eq!(i.product(&MonomialIdeal::unit(2)).unwrap(), i);
        assert_eq!(MonomialIdeal::maximal(2).power(2), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
        assert!(i.power(0).is_unit());

        let x2 = ideal(2, &[&[2, 0]]);
        let y = ideal(2, &[&[0, 1]]);
        assert_eq!(x2.sum(&y).unwrap(), i);
        assert_eq!(i.sum(&i).unwrap(), i);
        let a = ideal(2, &[&[3, 0], &[1, 1]]);
        let b = ideal(2, &[&[0, 2]]);
        assert_eq!(a.sum(&b).unwrap(), ideal(2, &[&[3, 0], &[1, 1], &[0, 2]]));
        assert!(i.product(&MonomialIdeal::maximal(3)).is_err());
    }

    #[test]
    fn membership_and_primary() {
        let i = ideal(2, &[&[2, 0], &[0, 1]]);
        assert!(!i.contains(&Exponent::new(vec![1, 0])).unwrap());
        assert!(i.contains(&Exponent::new(vec![2, 0])).unwrap());
        let j = ideal(2, &[&[3, 0], &[1, 1], &[0, 4]]);
        assert!(j.contains(&Exponent::new(vec![2, 3])).unwrap());
        assert!(i.is_m_primary());
        assert!(!ideal(2, &[&[1, 1]]).is_m_primary());
        assert!(j.is_m_primary());
        assert!(i.contains(&Exponent::new(vec![1])).is_err());
    }

    #[test]
    fn colength_examples() {
        assert_eq!(MonomialIdeal::maximal(2).colength().unwrap(), 1);
        for d in 1..=4usize {
            for n in 0..6u64 {
                let expect = crate::rational::binomial(n + d as u64 - 1, d as u64) as u64;
                assert_eq!(MonomialIdeal::maximal(d).power(n).colength().unwrap(), expect);
            }
        }
        let j = ideal(2, &[&[3, 0], &[1, 1], &[0, 4]]);
        assert_eq!(j.colength().unwrap(), 6);
        assert_eq!(brute_colength(&j), 6);
        assert_eq!(ideal(2, &[&[1, 1]]).colength(), Err(Error::NotMPrimary));
        assert_eq!(MonomialIdeal::unit(3).colength().unwrap(), 0);
    }

    #[test]
    fn max_standard_degree_gives_socle_bound() {
        let i = ideal(2, &[&[2, 0], &[0, 2]]);
        assert_eq!(i.max_standard_degree().unwrap(), Some(2));
        assert_eq!(MonomialIdeal::maximal(3).max_standard_degree().unwrap(), Some(0));
        assert_eq!(MonomialIdeal::unit(2).max_standard_degree().unwrap(), None);
    }

    #[test]
    fn display() {
        let j = ideal(2, &[&[3, 0], &[1, 1], &[0, 4]]);
        assert_eq!(j.to_string(), "(y^4, x*y, x^3)");
        assert_eq!(MonomialIdeal::unit(1).to_string(), "(1)");
    }

    #[test]
    fn json_shape() {
        let j: MonomialIdeal = serde_json::from_str(r#"{"dim":2,"gens":[[3,0],[2,3],[1,1],[0,4]]}"#).unwrap();
        assert_eq!(j, ideal(2, &[&[3, 0], &[1, 1], &[0, 4]]));
        let back = serde_json::to_string(&j).unwrap();
        assert_eq!(back, r#"{"dim":2,"gens":[[0,4],[1,1],[3,0]]}"#);
        assert!(serde_json::from_str::<MonomialIdeal>(r#"{"dim":2,"gens":[]}"#).is_err());
        assert!(serde_json::from_str::<MonomialIdeal>(r#"{"dim":2,"gens":[[1]]}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Random m-primary ideal: pure powers plus interior points.
        pub fn primary_ideal(dim: usize, max_exp: u32) -> impl Strategy<Value = MonomialIdeal> {
            (
                prop::collection::vec(1..=max_exp, dim),
                prop::collection::vec(prop::collection::vec(0..=max_exp, dim), 0..6),
            )
                .prop_map(move |(pure, extra)| {
                    let mut raw: Vec<Exponent> =
                        pure.iter().enumerate().map(|(i, &c)| Exponent::pure(dim, i, c)).collect();
                    raw.extend(extra.into_iter().map(Exponent::new));
                    minimalize(raw, dim).unwrap()
                })
        }

        fn any_primary() -> impl Strategy<Value = MonomialIdeal> {
            (1usize..=3).prop_flat_map(|d| primary_ideal(d, 12))
        }

        proptest! {
            #[test]
            fn colength_matches_box_scan(i in any_primary()) {
                prop_assert_eq!(i.colength().unwrap(), brute_colength(&i));
            }

            #[test]
            fn colength_is_antitone((i, j) in (1usize..=3).prop_flat_map(|d| (primary_ideal(d, 8), primary_ideal(d, 8)))) {
                let bigger = i.sum(&j).unwrap();
                prop_assert!(i.is_subset_of(&bigger).unwrap());
                prop_assert!(i.colength().unwrap() >= bigger.colength().unwrap());
            }

            #[test]
            fn product_commutes_and_associates(
                (a, b, c) in (1usize..=3).prop_flat_map(|d| (primary_ideal(d, 5), primary_ideal(d, 5), primary_ideal(d, 5)))
            ) {
                prop_assert_eq!(a.product(&b).unwrap(), b.product(&a).unwrap());
                let left = a.product(&b).unwrap().product(&c).unwrap();
                let right = a.product(&b.product(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn index_agrees_with_scan(
                (i, pts) in (2usize..=3).prop_flat_map(|d| (primary_ideal(d, 9), prop::collection::vec(prop::collection::vec(0u32..14, d), 1..40)))
            ) {
                let index = MembershipIndex::new(&i);
                for p in pts {
                    let scan = i.gens().iter().any(|g| leq(g.coords(), &p));
                    prop_assert_eq!(index.contains(&p), scan);
                }
            }
        }
    }
}
