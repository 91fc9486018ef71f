//! Seeded random `m`-primary monomial ideals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ideal::{minimalize, Exponent, MonomialIdeal};

/// Generator for the instance with the given seed.
pub fn instance_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The staircase below a random monotone lattice path from `(0, h)` to `(w, 0)`.
///
/// The path takes `w` right steps and `h - 1` down steps in random order; each
/// right step leaving column `x` at height `y` contributes the exponent `(x, y)`, and the
/// final drop to the axis contributes `(w, 0)`.
fn lattice_path_ideal<R: Rng>(rng: &mut R, max_exp: u32) -> MonomialIdeal {
    let w = rng.gen_range(1..=max_exp);
    let h = rng.gen_range(1..=max_exp);
    let mut steps: Vec<bool> =
        std::iter::repeat(true).take(w as usize).chain(std::iter::repeat(false).take(h as usize - 1)).collect();
    steps.shuffle(rng);
    let (mut x, mut y) = (0u32, h);
    let mut gens = vec![Exponent::new(vec![w, 0])];
    for right in steps {
        if right {
            gens.push(Exponent::new(vec![x, y]));
            x += 1;
        } else {
            y -= 1;
        }
    }
    minimalize(gens, 2).expect("nonempty")
}

/// A random `m`-primary ideal whose generators have exponents `<= max_exp`.
///
/// In two variables the ideal is cut out by a random lattice path; otherwise
/// it is spanned by random pure powers and up to three random mixed monomials.
pub fn random_primary_ideal<R: Rng>(rng: &mut R, dim: usize, max_exp: u32) -> MonomialIdeal {
    assert!(dim >= 1 && max_exp >= 1);
    match dim {
        1 => MonomialIdeal::pure_powers(&[rng.gen_range(1..=max_exp)]),
        2 => lattice_path_ideal(rng, max_exp),
        _ => {
            let mut gens: Vec<Exponent> = (0..dim).map(|i| Exponent::pure(dim, i, rng.gen_range(1..=max_exp))).collect();
            for _ in 0..rng.gen_range(0..=3) {
                let e: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..=max_exp)).collect();
                if e.iter().any(|&c| c > 0) {
                    gens.push(Exponent::new(e));
                }
            }
            minimalize(gens, dim).expect("nonempty")
        }
    }
}
