//! Shared proptest strategies.

use proptest::prelude::*;

use crate::ideal::{minimalize, Exponent, MonomialIdeal};

/// Random proper m-primary ideal: pure powers plus a few interior points.
pub fn primary_ideal(dim: usize, max_exp: u32) -> impl Strategy<Value = MonomialIdeal> {
    (
        prop::collection::vec(1..=max_exp, dim),
        prop::collection::vec(prop::collection::vec(0..=max_exp, dim), 0..5),
    )
        .prop_map(move |(pure, extra)| {
            let mut raw: Vec<Exponent> = pure.iter().enumerate().map(|(i, &c)| Exponent::pure(dim, i, c)).collect();
            raw.extend(extra.into_iter().filter(|e| e.iter().any(|&c| c > 0)).map(Exponent::new));
            minimalize(raw, dim).unwrap()
        })
}
