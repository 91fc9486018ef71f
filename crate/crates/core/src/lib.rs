//! Multiplicities of filtrations of monomial ideals.
//!
//! Filtrations are built in [`filtration`], their limits and mixed tables are
//! computed in [`multiplicity`], and [`verifier`] checks the classical
//! inequalities on them. Everything is exact rational arithmetic unless a
//! numeric [`multiplicity::Strategy`] is requested.
//!
//! ```
//! use filtmult::filtration::Filtration;
//! use filtmult::ideal::MonomialIdeal;
//! use filtmult::multiplicity::{filtration_multiplicity, Strategy};
//! use filtmult::rational::int;
//!
//! let f = Filtration::power(MonomialIdeal::pure_powers(&[2, 3])).unwrap();
//! assert_eq!(filtration_multiplicity(&f, &Strategy::exact()).unwrap().value, int(6));
//! ```

pub mod error;
pub mod filtration;
pub mod hull;
pub mod ideal;
pub mod linalg;
pub mod multi;
pub mod multiplicity;
pub mod newton;
pub mod okounkov;
pub mod quadratic;
pub mod rational;
pub mod verifier;

#[cfg(test)]
pub(crate) mod testing;

/// The guide's snippets, compiled as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/ideals.md")]
    pub mod ideals {}
    #[doc = include_str!("../../../book/src/filtrations.md")]
    pub mod filtrations {}
    #[doc = include_str!("../../../book/src/multiplicity.md")]
    pub mod multiplicity {}
    #[doc = include_str!("../../../book/src/mixed.md")]
    pub mod mixed {}
    #[doc = include_str!("../../../book/src/okounkov.md")]
    pub mod okounkov {}
    #[doc = include_str!("../../../book/src/verifier.md")]
    pub mod verifier {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../book/src/schemas.md")]
    pub mod schemas {}
}
