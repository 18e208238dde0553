use num_bigint::BigInt;
use proptest::prelude::*;

use aztec_core::castle::build_castle;
use aztec_core::contour::{side_lengths, tuple_for_point};
use aztec_core::matchings::{
    enumerate, height, minimal_matching_bruteforce, twist, twistable_faces, weight, Twist,
};
use aztec_core::minmatch::zero_line_identities;
use aztec_core::poly::{LaurentPoly, Monomial, Var, NUM_VARS};
use aztec_core::prism::PrismState;
use aztec_core::tiling::{color_of, LatticePoint};

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::array::uniform12(-3i32..=3).prop_map(|e| {
        let mut exps = [0i32; NUM_VARS];
        exps.copy_from_slice(&e);
        Monomial::from_exponents(exps)
    })
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((monomial(), -5i64..=5), 0..6).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|(m, c)| (m, BigInt::from(c))))
    })
}

fn small_point() -> impl Strategy<Value = (i64, i64, i64)> {
    (-2i64..=2, -2i64..=2, -2i64..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn exact_division_inverts_product(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn text_form_round_trips(a in poly()) {
        let back: LaurentPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn specializing_y_is_a_ring_map(a in poly(), b in poly()) {
        prop_assert_eq!((&a * &b).specialize_y_to_one(), &a.specialize_y_to_one() * &b.specialize_y_to_one());
        prop_assert!(!a.specialize_y_to_one().terms().any(|(m, _)| Var::all().any(|v| v.is_y() && m.exponent(v) != 0)));
    }

    #[test]
    fn contour_identities(i in -1000i64..=1000, j in -1000i64..=1000, k in -1000i64..=1000) {
        let [a, b, c, d, e, f] = side_lengths(i, j, k);
        prop_assert_eq!(a + b, d + e);
        prop_assert_eq!(c + d, f + a);
        prop_assert_eq!(a + b + c + d + e + f, 1);
        for ok in zero_line_identities(i, j, k) {
            prop_assert!(ok);
        }
    }

    #[test]
    fn contour_polyline_closes(i in -12i64..=12, j in -12i64..=12, k in -12i64..=12) {
        let c = tuple_for_point(i, j, k);
        prop_assert!(c.closes());
        prop_assert!(c.closure_holds() && c.balance_holds());
        if !c.is_self_intersecting() {
            prop_assert_eq!(c.signs.sign_changes(), 4);
        }
    }

    #[test]
    fn prism_taus_are_involutions(word in prop::collection::vec(1u8..=5, 0..12), t in 1u8..=5) {
        let p = PrismState::initial().apply_word(&word);
        prop_assert_eq!(p.apply_tau(t).apply_tau(t), p);
    }

    #[test]
    fn half_turn_preserves_the_vertex_set(u in -40i64..=40, v in -40i64..=40) {
        let p = LatticePoint::new(u, v);
        prop_assert_eq!(p.rotate_180().rotate_180(), p);
        prop_assert_eq!(color_of(p).is_some(), color_of(p.rotate_180()).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn castles_are_balanced(p in small_point()) {
        let Ok(raw) = build_castle(p.0, p.1, p.2) else { return Ok(()) };
        prop_assert!(raw.is_balanced());
        prop_assert!(raw.trim_dangling().is_balanced());
    }

    #[test]
    fn twisting_is_an_involution(p in small_point(), pick in any::<prop::sample::Index>()) {
        prop_assume!(!tuple_for_point(p.0, p.1, p.2).is_self_intersecting());
        let c = build_castle(p.0, p.1, p.2).unwrap().trim_dangling();
        let Ok(all) = enumerate(&c, 5_000) else { return Ok(()) };
        prop_assume!(!all.is_empty());
        let m = &all[pick.index(all.len())];
        for (face, t) in twistable_faces(&c, m) {
            let back = twist(&c, m, face).unwrap();
            prop_assert!(back.is_perfect(&c));
            let flipped = twistable_faces(&c, &back).into_iter().find(|&(f, _)| f == face).map(|(_, t)| t);
            let expected = if t == Twist::Positive { Twist::Negative } else { Twist::Positive };
            prop_assert_eq!(flipped, Some(expected));
            prop_assert_eq!(&twist(&c, &back, face).unwrap(), m);
        }
    }

    #[test]
    fn one_twist_up_has_height_of_its_face(p in small_point()) {
        prop_assume!(!tuple_for_point(p.0, p.1, p.2).is_self_intersecting());
        let c = build_castle(p.0, p.1, p.2).unwrap().trim_dangling();
        prop_assume!(!c.vertices.is_empty());
        let Ok(min) = minimal_matching_bruteforce(&c, 5_000) else { return Ok(()) };
        prop_assert!(height(&c, &min, &min).is_one());
        for (face, t) in twistable_faces(&c, &min) {
            prop_assert_eq!(t, Twist::Negative);
            let up = twist(&c, &min, face).unwrap();
            let y = Var::y(c.faces[face].label as usize);
            prop_assert_eq!(height(&c, &up, &min), Monomial::var(y));
            // weights live in the x variables only
            let ratio = weight(&c, &up).div(&weight(&c, &min));
            prop_assert!(ratio.support().all(|(v, _)| !v.is_y()));
        }
    }
}
