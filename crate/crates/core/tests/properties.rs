use filtmult::filtration::{Filtration, FiltrationSpec};
use filtmult::ideal::MonomialIdeal;
use filtmult::multiplicity::{hilbert_samuel_multiplicity, mixed_multiplicity_table, MixedTable, Strategy};
use filtmult::rational::{int, Rational};
use filtmult::verifier::{instance_rng, minkowski_report, random_primary_ideal};
use proptest::prelude::*;
use proptest::strategy::Strategy as _;

fn staircase() -> impl proptest::strategy::Strategy<Value = MonomialIdeal> {
    (any::<u64>(), 1u32..=6).prop_map(|(seed, max)| random_primary_ideal(&mut instance_rng(seed), 2, max))
}

fn brute_colength(i: &MonomialIdeal) -> u64 {
    let b = i.box_bounds().unwrap();
    let mut n = 0;
    for x in 0..b[0] {
        for y in 0..b[1] {
            n += u64::from(!i.gens().iter().any(|g| g.coords()[0] <= x && g.coords()[1] <= y));
        }
    }
    n
}

/// Twice the area between the axes and the lower hull of the generators.
fn twice_covolume(i: &MonomialIdeal) -> i64 {
    let mut pts: Vec<(i64, i64)> = i.gens().iter().map(|g| (g.coords()[0] as i64, g.coords()[1] as i64)).collect();
    pts.sort();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut poly = vec![(0, 0)];
    poly.extend(hull.iter().rev());
    let twice: i64 = (0..poly.len()).map(|k| {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        p.0 * q.1 - q.0 * p.1
    }).sum();
    twice.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn colength_matches_box_scan(i in staircase()) {
        prop_assert_eq!(i.colength().unwrap(), brute_colength(&i));
    }

    #[test]
    fn multiplicity_is_twice_the_covolume(i in staircase()) {
        prop_assert_eq!(hilbert_samuel_multiplicity(&i).unwrap() as i64, twice_covolume(&i));
    }

    // e(IJ) = e(I) + 2 e(I, J) + e(J) in two variables.
    #[test]
    fn mixed_entry_from_product_multiplicity(i in staircase(), j in staircase()) {
        let fs = [Filtration::power(i.clone()).unwrap(), Filtration::power(j.clone()).unwrap()];
        let t: MixedTable = mixed_multiplicity_table(&fs, &Strategy::exact()).unwrap();
        let e = |x: &MonomialIdeal| int(hilbert_samuel_multiplicity(x).unwrap() as i64);
        let mixed = (e(&i.product(&j).unwrap()) - e(&i) - e(&j)) / int(2);
        prop_assert_eq!(t.value(&[1, 1]), Some(&mixed));
        prop_assert_eq!(t.value(&[2, 0]), Some(&e(&i)));
        prop_assert_eq!(t.value(&[0, 2]), Some(&e(&j)));
    }

    #[test]
    fn minkowski_never_fails(i in staircase(), j in staircase()) {
        let r = minkowski_report(&Filtration::power(i).unwrap(), &Filtration::power(j).unwrap(), &Strategy::exact(), 0.0).unwrap();
        prop_assert!(r.pass);
        prop_assert!(r.records.iter().all(|x| x.certified));
    }

    #[test]
    fn filtration_json_round_trips(i in staircase(), shift in 0u64..3, level in 1u64..4) {
        for f in [
            Filtration::power(i.clone()).unwrap(),
            Filtration::shifted_power(i.clone(), shift).unwrap(),
            Filtration::power(i.clone()).unwrap().truncate(level).unwrap(),
        ] {
            let json = serde_json::to_string(&f).unwrap();
            let back: Filtration = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back.to_spec(), f.to_spec());
            prop_assert_eq!(serde_json::from_str::<FiltrationSpec>(&json).unwrap(), f.to_spec());
            for n in 0..4 {
                prop_assert_eq!(back.ideal_at(n).unwrap(), f.ideal_at(n).unwrap());
            }
        }
    }
}

#[test]
fn table_values_reconstruct_the_limit_polynomial() {
    let a = MonomialIdeal::from_rows(2, &[&[3, 0], &[1, 1], &[0, 4]]).unwrap();
    let b = MonomialIdeal::from_rows(2, &[&[2, 0], &[0, 2]]).unwrap();
    let fs = [Filtration::power(a.clone()).unwrap(), Filtration::power(b.clone()).unwrap()];
    let t = mixed_multiplicity_table(&fs, &Strategy::exact()).unwrap();
    // G(2, 3) = e(a^2 b^3) / 2.
    let direct = Rational::new(hilbert_samuel_multiplicity(&a.power(2).product(&b.power(3)).unwrap()).unwrap().into(), 2.into());
    assert_eq!(t.evaluate(&[2, 3]), direct);
}
