use num_complex::Complex64;
use proptest::prelude::*;

use ccrlab::classify::{equivalent_lattices, spectrum_type, SpectrumType};
use ccrlab::cone::Functional;
use ccrlab::fock::UnitSpec;
use ccrlab::index::{covariance, gns_rank, interior_points, sample_units};
use ccrlab::lattice::{lattice_equal, Lattice};
use ccrlab::rational::{add, format_rational, ivec, parse_rational, q, scale, QVec};
use ccrlab::scenario::{generate_family, Scenario, ScenarioSpec};

fn e3() -> Functional {
    Functional::from_direction(&ivec(&[1, 1, 1])).unwrap()
}

/// Rational vectors in e^⊥ for e = (1, 1, 1).
fn perp_vector() -> impl Strategy<Value = QVec> {
    (-3i64..=3, -3i64..=3, 1i64..=3).prop_map(|(a, b, d)| {
        let u = ivec(&[1, -1, 0]);
        let v = ivec(&[0, 1, -1]);
        add(&scale(&u, &q(a, d)), &scale(&v, &q(b, d)))
    })
}

fn rank2_lattice() -> impl Strategy<Value = Lattice> {
    (perp_vector(), perp_vector())
        .prop_filter_map("independent", |(a, b)| Lattice::new(3, vec![a, b]).ok().filter(|l| l.rank() == 2))
}

/// Integer 2x2 matrices of determinant ±1.
fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0usize..4, -3i64..=3), 0..6).prop_map(|ops| {
        let mut m = [[1, 0], [0, 1]];
        for (op, c) in ops {
            match op {
                0 => m[0] = [m[0][0] + c * m[1][0], m[0][1] + c * m[1][1]],
                1 => m[1] = [m[1][0] + c * m[0][0], m[1][1] + c * m[0][1]],
                2 => m.swap(0, 1),
                _ => m[0] = [-m[0][0], -m[0][1]],
            }
        }
        m
    })
}

fn rebase(l: &Lattice, m: [[i64; 2]; 2]) -> Lattice {
    let b = l.basis();
    let row = |r: [i64; 2]| add(&scale(&b[0], &q(r[0], 1)), &scale(&b[1], &q(r[1], 1)));
    Lattice::new(3, vec![row(m[0]), row(m[1])]).unwrap()
}

fn q2_scenario() -> Scenario {
    generate_family(&ScenarioSpec::new("q2", vec![ivec(&[1, 0]), ivec(&[0, 1])], vec![ivec(&[1, -1])])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let x = q(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn hnf_is_basis_independent(l in rank2_lattice(), m in unimodular()) {
        let other = rebase(&l, m);
        prop_assert_eq!(l.hnf(), other.hnf());
        prop_assert!(lattice_equal(&l, &other));
        prop_assert!(equivalent_lattices(&l, &other, &e3()).unwrap().equivalent);
    }

    #[test]
    fn spectrum_is_periodic_in_the_lattice(l in rank2_lattice(), x in perp_vector(), a in -3i64..=3, b in -3i64..=3) {
        let e = e3();
        let shifted = add(&x, &l.point(&[a, b]));
        prop_assert_eq!(spectrum_type(&x, &l, &e).unwrap(), spectrum_type(&shifted, &l, &e).unwrap());
        prop_assert_eq!(spectrum_type(&l.point(&[a, b]), &l, &e).unwrap(), SpectrumType::Trivial);
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(a in rank2_lattice(), b in rank2_lattice(), c in rank2_lattice()) {
        let e = e3();
        let eq = |x: &Lattice, y: &Lattice| equivalent_lattices(x, y, &e).unwrap().equivalent;
        prop_assert!(eq(&a, &a));
        prop_assert_eq!(eq(&a, &b), eq(&b, &a));
        if eq(&a, &b) && eq(&b, &c) {
            prop_assert!(eq(&a, &c));
        }
        if let Some(cert) = equivalent_lattices(&a, &b, &e).unwrap().certificate {
            prop_assert!(cert.is_valid());
        }
    }

    #[test]
    fn gram_rank_ignores_duplicates_and_order(seed in 0u64..1000, dup in 0usize..5, rot in 0usize..5) {
        let s = q2_scenario();
        let mask = s.pspace.mask(&s.window).unwrap();
        let (a, _) = interior_points(&mask, true).unwrap();
        let units = sample_units(2, 1, 5, seed);
        let rank = |u: &[UnitSpec]| gns_rank(&covariance(u, &a, &mask).unwrap()).unwrap().rank;
        let base = rank(&units);
        let mut with_dup = units.clone();
        with_dup.push(units[dup].clone());
        prop_assert_eq!(rank(&with_dup), base);
        let mut rotated = units.clone();
        rotated.rotate_left(rot);
        prop_assert_eq!(rank(&rotated), base);
    }

    #[test]
    fn gram_is_psd_on_sum_zero_vectors(seed in 0u64..1000, re in prop::collection::vec(-1.0f64..1.0, 6)) {
        let s = q2_scenario();
        let mask = s.pspace.mask(&s.window).unwrap();
        let (a, _) = interior_points(&mask, true).unwrap();
        let c = covariance(&sample_units(2, 1, 6, seed), &a, &mask).unwrap();
        let mean = re.iter().sum::<f64>() / 6.0;
        let f: Vec<Complex64> = re.iter().map(|x| Complex64::new(x - mean, 0.0)).collect();
        let v = c.form(&f);
        prop_assert!(v.re >= -1e-12 && v.im.abs() < 1e-12);
    }
}
