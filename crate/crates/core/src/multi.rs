//! Multigraded filtrations `I_n`, `n ∈ N^r`, with `I_a I_b ⊆ I_{a+b}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{Filtration, FiltrationSpec};
use crate::ideal::{product_contained_in, MonomialIdeal};

#[derive(Clone, Debug)]
pub enum MultiKind {
    /// `I_n = Π_j I(j)_{n_j}`.
    Product(Vec<Filtration>),
    /// `I_n = (x^{⌈√(Σ w_j n_j²)⌉})` in one variable.
    CeilingNorm(Vec<u64>),
    /// Generated by `base` in total degree `<= level`.
    Truncated { base: MultiFiltration, level: u64 },
}

struct Inner {
    dim: usize,
    arity: usize,
    kind: MultiKind,
    cache: RwLock<HashMap<Vec<u64>, MonomialIdeal>>,
}

#[derive(Clone)]
pub struct MultiFiltration(Arc<Inner>);

impl fmt::Debug for MultiFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiFiltration")
            .field("dim", &self.0.dim)
            .field("arity", &self.0.arity)
            .field("kind", &self.0.kind)
            .finish()
    }
}

fn isqrt_ceil(n: u128) -> u64 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    if r * r == n {
        r as u64
    } else {
        r as u64 + 1
    }
}

impl MultiFiltration {
    fn build(dim: usize, arity: usize, kind: MultiKind) -> Self {
        MultiFiltration(Arc::new(Inner { dim, arity, kind, cache: RwLock::new(HashMap::new()) }))
    }

    pub fn product(parts: Vec<Filtration>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidFiltration("product needs at least one filtration".into()));
        };
        let dim = first.dim();
        if let Some(bad) = parts.iter().find(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self::build(dim, parts.len(), MultiKind::Product(parts)))
    }

    pub fn ceiling_norm(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::InvalidFiltration("ceiling norm weights must be positive".into()));
        }
        Ok(Self::build(1, weights.len(), MultiKind::CeilingNorm(weights)))
    }

    pub fn truncate(&self, level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("truncation level must be positive".into()));
        }
        Ok(Self::build(self.0.dim, self.0.arity, MultiKind::Truncated { base: self.clone(), level }))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn kind(&self) -> &MultiKind {
        &self.0.kind
    }

    /// The factors, when this is a product of single-index filtrations.
    pub fn factors(&self) -> Option<&[Filtration]> {
        match &self.0.kind {
            MultiKind::Product(parts) => Some(parts),
            _ => None,
        }
    }

    pub fn ideal_at(&self, n: &[u64]) -> Result<MonomialIdeal> {
        if n.len() != self.0.arity {
            return Err(Error::ArityMismatch { expected: self.0.arity, found: n.len() });
        }
        if n.iter().all(|&x| x == 0) {
            return Ok(MonomialIdeal::unit(self.0.dim));
        }
        if let Some(i) = self.0.cache.read().unwrap().get(n) {
            return Ok(i.clone());
        }
        let ideal = match &self.0.kind {
            MultiKind::Product(parts) => {
                let mut acc = MonomialIdeal::unit(self.0.dim);
                for (f, &k) in parts.iter().zip(n) {
                    acc = acc.product(&f.ideal_at(k)?)?;
                }
                acc
            }
            MultiKind::CeilingNorm(w) => {
                let q: u128 = w.iter().zip(n).map(|(&w, &k)| w as u128 * k as u128 * k as u128).sum();
                MonomialIdeal::pure_powers(&[isqrt_ceil(q) as u32])
            }
            MultiKind::Truncated { base, level } => self.truncated_at(base, *level, n)?,
        };
        self.0.cache.write().unwrap().entry(n.to_vec()).or_insert_with(|| ideal.clone());
        Ok(ideal)
    }

    fn truncated_at(&self, base: &MultiFiltration, level: u64, n: &[u64]) -> Result<MonomialIdeal> {
        let total: u64 = n.iter().sum();
        if total <= level {
            return base.ideal_at(n);
        }
        let mut acc: Option<MonomialIdeal> = None;
        let mut k = vec![0u64; n.len()];
        // Iterate over all 0 <= k <= n; keep proper nonzero parts of degree <= level.
        loop {
            let deg: u64 = k.iter().sum();
            if deg > 0 && deg <= level && deg < total {
                let rest: Vec<u64> = n.iter().zip(&k).map(|(a, b)| a - b).collect();
                let term = base.ideal_at(&k)?.product(&self.ideal_at(&rest)?)?;
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.sum(&term)?,
                });
            }
            let mut axis = 0;
            loop {
                if axis == n.len() {
                    return Ok(acc.expect("some split exists"));
                }
                if k[axis] < n[axis] {
                    k[axis] += 1;
                    break;
                }
                k[axis] = 0;
                axis += 1;
            }
        }
    }

    pub fn to_spec(&self) -> MultiFiltrationSpec {
        match &self.0.kind {
            MultiKind::Product(parts) => MultiFiltrationSpec::Product { factors: parts.iter().map(|f| f.to_spec()).collect() },
            MultiKind::CeilingNorm(w) => MultiFiltrationSpec::CeilingNorm { weights: w.clone() },
            MultiKind::Truncated { base, level } => {
                MultiFiltrationSpec::Truncated { base: Box::new(base.to_spec()), level: *level }
            }
        }
    }
}

/// All `n ∈ N^r` with `|n| = total`, in lexicographically descending order.
pub fn compositions(r: usize, total: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(r: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() + 1 == r {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in (0..=left).rev() {
            cur.push(v);
            rec(r, left - v, cur, out);
            cur.pop();
        }
    }
    if r > 0 {
        rec(r, total, &mut cur, &mut out);
    }
    out
}

/// Checks `I_{n+e_j} ⊆ I_n` and `I_a I_b ⊆ I_{a+b}` for `|a + b| <= total`.
/// Returns the first failing pair `(a, b)`; descent failures report `b = e_j`.
pub fn verify_multi(f: &MultiFiltration, total: u64) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
    let r = f.arity();
    let all: Vec<Vec<u64>> = (0..=total).flat_map(|t| compositions(r, t)).collect();
    for n in &all {
        let i_n = f.ideal_at(n)?;
        for j in 0..r {
            let mut up = n.clone();
            up[j] += 1;
            if up.iter().sum::<u64>() <= total && !f.ideal_at(&up)?.is_subset_of(&i_n)? {
                let mut e = vec![0; r];
                e[j] = 1;
                return Ok(Some((n.clone(), e)));
            }
        }
    }
    for a in &all {
        for b in &all {
            let s: Vec<u64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if s.iter().sum::<u64>() > total || a > b {
                continue;
            }
            if !product_contained_in(&f.ideal_at(a)?, &f.ideal_at(b)?, &f.ideal_at(&s)?)? {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MultiFiltrationSpec {
    Product { factors: Vec<FiltrationSpec> },
    CeilingNorm { weights: Vec<u64> },
    Truncated { base: Box<MultiFiltrationSpec>, level: u64 },
}

impl MultiFiltrationSpec {
    pub fn build(&self) -> Result<MultiFiltration> {
        match self {
            MultiFiltrationSpec::Product { factors } => {
                MultiFiltration::product(factors.iter().map(|f| f.build()).collect::<Result<_>>()?)
            }
            MultiFiltrationSpec::CeilingNorm { weights } => MultiFiltration::ceiling_norm(weights.clone()),
            MultiFiltrationSpec::Truncated { base, level } => base.build()?.truncate(*level),
        }
    }
}

impl Serialize for MultiFiltration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiFiltration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MultiFiltrationSpec::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{rate, root_two};

    #[test]
    fn ceiling_norm_values() {
        let f = MultiFiltration::ceiling_norm(vec![1, 1]).unwrap();
        assert_eq!(f.ideal_at(&[3, 4]).unwrap(), MonomialIdeal::pure_powers(&[5]));
        assert_eq!(f.ideal_at(&[1, 1]).unwrap(), MonomialIdeal::pure_powers(&[2]));
        assert!(f.ideal_at(&[0, 0]).unwrap().is_unit());
        assert_eq!(f.ideal_at(&[1]), Err(Error::ArityMismatch { expected: 2, found: 1 }));
        for q in [0u128, 1, 2, 3, 4, 15, 16, 17, 1 << 60, (1 << 60) + 1] {
            let c = isqrt_ceil(q) as u128;
            assert!(c * c >= q && (c == 0 || (c - 1) * (c - 1) < q));
        }
    }

    #[test]
    fn product_values() {
        let m = Filtration::power(MonomialIdeal::maximal(2)).unwrap();
        let v = Filtration::valuation(vec![rate(1, 1), rate(2, 1)]).unwrap();
        let f = MultiFiltration::product(vec![m.clone(), v.clone()]).unwrap();
        let expect = m.ideal_at(2).unwrap().product(&v.ideal_at(3).unwrap()).unwrap();
        assert_eq!(f.ideal_at(&[2, 3]).unwrap(), expect);
        assert_eq!(f.ideal_at(&[2, 0]).unwrap(), m.ideal_at(2).unwrap());
        let d1 = Filtration::diagonal(vec![root_two()]).unwrap();
        assert!(MultiFiltration::product(vec![m, d1]).is_err());
    }

    #[test]
    fn multi_axioms_hold() {
        let f = MultiFiltration::ceiling_norm(vec![1, 2]).unwrap();
        assert_eq!(verify_multi(&f, 8).unwrap(), None);
        let t = f.truncate(2).unwrap();
        assert_eq!(verify_multi(&t, 7).unwrap(), None);
        for n in compositions(2, 5) {
            assert!(t.ideal_at(&n).unwrap().is_subset_of(&f.ideal_at(&n).unwrap()).unwrap());
        }
        let m = Filtration::power(MonomialIdeal::maximal(2)).unwrap();
        let v = Filtration::valuation(vec![rate(1, 1), root_two()]).unwrap();
        let p = MultiFiltration::product(vec![m, v]).unwrap();
        assert_eq!(verify_multi(&p, 6).unwrap(), None);
    }

    #[test]
    fn compositions_are_ordered() {
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(3, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(compositions(3, 4).len(), 15);
    }

    #[test]
    fn spec_round_trip() {
        let src = r#"{"kind":"truncated","level":2,"base":{"kind":"ceiling_norm","weights":[1,1]}}"#;
        let f: MultiFiltration = serde_json::from_str(src).unwrap();
        let again: MultiFiltration = serde_json::from_value(serde_json::to_value(&f).unwrap()).unwrap();
        assert_eq!(again.ideal_at(&[3, 2]).unwrap(), f.ideal_at(&[3, 2]).unwrap());
    }
}
