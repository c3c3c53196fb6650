//! Property tests for structural invariants: group axioms across backends,
//! ball growth in Z^d, agreement-radius closure, diagonal products and
//! input validation.

use mgk_core::cayley::{agreement_radius, ball, balls_isomorphic, AgreementRadius};
use mgk_core::constructions::{dihedral, wreath};
use mgk_core::diagonal::diagonal_product;
use mgk_core::groups::std_groups::{alternating, cyclic, free_abelian, sl2, symmetric};
use mgk_core::groups::{BigOrder, Caps, Element, MarkedGroup};
use mgk_core::pipeline::PrimeSchedule;
use num_bigint::BigUint;
use proptest::prelude::*;

fn word(k: usize, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    let k = k as i64;
    prop::collection::vec(
        (1..=k, any::<bool>()).prop_map(|(l, neg)| if neg { -l } else { l }),
        0..=max_len,
    )
}

fn zoo() -> Vec<MarkedGroup> {
    vec![
        symmetric(5).unwrap(),
        alternating(6).unwrap(),
        sl2(5).unwrap(),
        dihedral(None).unwrap(),
        dihedral(Some(7)).unwrap(),
        free_abelian(3).unwrap(),
        wreath(&symmetric(3).unwrap(), &cyclic(Some(4)).unwrap()).unwrap(),
        wreath(&alternating(4).unwrap(), &cyclic(None).unwrap()).unwrap(),
    ]
}

fn three_words() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (0..zoo().len()).prop_flat_map(|i| {
        let k = zoo()[i].k();
        (Just(i), word(k, 8), word(k, 8), word(k, 8))
    })
}

fn order_of(mg: &MarkedGroup) -> BigUint {
    match mg.order(&Caps::default()).unwrap() {
        BigOrder::Finite(n) => n,
        other => panic!("{} has order {other:?}", mg.name),
    }
}

/// |B(r)| in Z^d with the standard marking: sum over k of 2^k C(d,k) C(r,k).
fn lattice_ball_size(d: u64, r: u64) -> u64 {
    let binom = |n: u64, k: u64| -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    };
    (0..=d)
        .map(|k| (1u64 << k) * binom(d, k) * binom(r, k))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn multiplication_is_associative((i, a, b, c) in three_words()) {
        let mg = &zoo()[i];
        let g = &mg.group;
        let (x, y, z) = (mg.eval_word(&a).unwrap(), mg.eval_word(&b).unwrap(), mg.eval_word(&c).unwrap());
        let left = g.mul(&g.mul(&x, &y).unwrap(), &z).unwrap();
        let right = g.mul(&x, &g.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right, "{}", mg.name);
    }

    #[test]
    fn inverses_and_identity((i, a, b, _) in three_words()) {
        let mg = &zoo()[i];
        let g = &mg.group;
        let x = mg.eval_word(&a).unwrap();
        let inv = g.inv(&x).unwrap();
        prop_assert!(g.is_identity(&g.mul(&x, &inv).unwrap()));
        prop_assert!(g.is_identity(&g.mul(&inv, &x).unwrap()));
        prop_assert_eq!(g.mul(&g.identity(), &x).unwrap(), x.clone());
        // The inverse of a word is the reversed word with inverted letters.
        let rev: Vec<i64> = a.iter().rev().map(|l| -l).collect();
        prop_assert_eq!(mg.eval_word(&rev).unwrap(), inv);
        // Evaluation is a homomorphism from the free group.
        let ab: Vec<i64> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(mg.eval_word(&ab).unwrap(), g.mul(&x, &mg.eval_word(&b).unwrap()).unwrap());
    }

    #[test]
    fn commutator_convention((i, a, b, _) in three_words()) {
        let mg = &zoo()[i];
        let g = &mg.group;
        let (x, y) = (mg.eval_word(&a).unwrap(), mg.eval_word(&b).unwrap());
        let direct = g.mul(&g.mul(&g.inv(&x).unwrap(), &g.inv(&y).unwrap()).unwrap(), &g.mul(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(g.commutator(&x, &y).unwrap(), direct);
    }

    #[test]
    fn lattice_balls_have_the_expected_size(d in 1usize..=3, r in 0u32..=6) {
        let b = ball(&free_abelian(d).unwrap(), r, &Caps::default()).unwrap();
        prop_assert_eq!(b.vertices.len() as u64, lattice_ball_size(d as u64, r as u64));
        prop_assert!(b.vertices.windows(2).all(|w| w[0].dist <= w[1].dist));
        prop_assert_eq!(b.vertices[0].dist, 0);
    }

    #[test]
    fn cyclic_agreement_with_z(n in 2u64..40) {
        // (Z/n; 1) and (Z; 1) agree up to radius floor((n - 2) / 2); one step
        // later the cycle closes.
        let r = agreement_radius(&cyclic(Some(n)).unwrap(), &cyclic(None).unwrap(), 64, &Caps::default()).unwrap();
        prop_assert_eq!(r, AgreementRadius::Exact(((n - 2) / 2) as u32));
    }

    #[test]
    fn agreement_radius_is_downward_closed(n in 2u64..10, m in 2u64..10) {
        let caps = Caps::default();
        let (a, b) = (dihedral(Some(n)).unwrap(), dihedral(Some(m)).unwrap());
        let iso = |k: u32| balls_isomorphic(&ball(&a, k, &caps).unwrap(), &ball(&b, k, &caps).unwrap()).unwrap().is_isomorphic();
        match agreement_radius(&a, &b, 12, &caps).unwrap() {
            AgreementRadius::Never => prop_assert!(!iso(0)),
            AgreementRadius::Exact(k) => {
                prop_assert!((0..=k).all(iso));
                prop_assert!(!iso(k + 1));
            }
            AgreementRadius::AtLeast(k) => {
                prop_assert_eq!(n, m);
                prop_assert!((0..=k).all(iso));
            }
        }
    }

    #[test]
    fn agreement_is_symmetric(n in 2u64..12, m in 2u64..12) {
        let caps = Caps::default();
        let (a, b) = (cyclic(Some(n)).unwrap(), cyclic(Some(m)).unwrap());
        prop_assert_eq!(agreement_radius(&a, &b, 16, &caps).unwrap(), agreement_radius(&b, &a, 16, &caps).unwrap());
    }

    #[test]
    fn diagonal_of_cyclics_has_lcm_order(a in 1u64..30, b in 1u64..30) {
        let d = diagonal_product(&[cyclic(Some(a)).unwrap(), cyclic(Some(b)).unwrap()]).unwrap();
        let lcm = a / gcd(a, b) * b;
        prop_assert_eq!(order_of(&d), BigUint::from(lcm));
    }

    #[test]
    fn diagonal_projects_onto_factors(n in 3usize..6, m in 3u64..9, w in word(2, 12)) {
        let factors = [symmetric(n).unwrap(), dihedral(Some(m)).unwrap()];
        let d = diagonal_product(&factors).unwrap();
        let Element::Tuple(parts) = d.eval_word(&w).unwrap() else { panic!("diagonal elements are tuples") };
        for (f, part) in factors.iter().zip(&parts) {
            prop_assert_eq!(&f.eval_word(&w).unwrap(), part);
        }
    }

    #[test]
    fn diagonal_order_is_between_factor_orders_and_product(n in 3usize..6, m in 2u64..9) {
        let factors = [symmetric(n).unwrap(), dihedral(Some(m)).unwrap()];
        let orders: Vec<BigUint> = factors.iter().map(order_of).collect();
        let delta = order_of(&diagonal_product(&factors).unwrap());
        for o in &orders {
            prop_assert!((&delta % o) == BigUint::from(0u32));
        }
        prop_assert!(delta <= orders.iter().product::<BigUint>());
    }

    #[test]
    fn sidon_placements_are_checked(marks in prop::collection::btree_set(0i64..60, 2..7)) {
        let marks: Vec<i64> = marks.into_iter().collect();
        let mut diffs = Vec::new();
        for (i, a) in marks.iter().enumerate() {
            for b in &marks[i + 1..] {
                diffs.push(b - a);
            }
        }
        let golomb = { let mut s = diffs.clone(); s.sort(); s.dedup(); s.len() == diffs.len() };
        let p = next_prime(4 * (marks.last().unwrap() - marks[0]) as u64 + 10);
        let schedule = PrimeSchedule { sidon: marks.clone(), pairs: vec![(p - 2, p)] };
        let pp_ok = gcd(p - 2, p) == 1;
        prop_assert_eq!(schedule.validate(marks.len()).is_ok(), golomb && pp_ok);
    }

    #[test]
    fn caps_must_be_positive(ball_cap in 0usize..3, closure in 0usize..3, points in 0usize..3) {
        let caps = Caps { ball: ball_cap, closure, bsgs_points: points, ..Caps::default() };
        prop_assert_eq!(caps.validate().is_ok(), ball_cap > 0 && closure > 0 && points > 0);
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn next_prime(mut n: u64) -> u64 {
    while !mgk_core::groups::matrix::is_prime(n) {
        n += 1;
    }
    n
}

#[test]
fn schedule_rejects_bad_primes() {
    let mut s = PrimeSchedule::default_two_stage();
    assert!(s.validate(15).is_ok());
    s.pairs[1] = (163, 309);
    assert!(s.validate(15).is_err());
    s.pairs = vec![(163, 307), (157, 293)];
    assert!(s.validate(15).is_err());
    s.pairs = vec![(149, 293)];
    assert!(s.validate(15).is_err(), "p' must exceed the span");
    assert!(PrimeSchedule::default_two_stage().validate(14).is_err());
}
