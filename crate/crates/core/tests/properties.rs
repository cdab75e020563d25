use num_bigint::BigInt;
use num_rational::BigRational;
use perv_core::algebra::{char_roots, common_eigenvector, eig1_multiplicity, Mat2, Scalar};
use perv_core::local_system::{
    composition_factors, ic_length, pushforward_length, semisimplify, Monodromies, Pushforward, Representation,
};
use perv_core::torus::{intersect_cosets, member_torsion, TorsionCoset, TorsionPoint, TorusFormula};
use perv_core::trace::{length_from_traces, rep_from_traces, stratify, trace_coords, TracePoint};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn arb_rational(h: i64) -> impl Strategy<Value = BigRational> {
    (-h..=h, 1..=h).prop_map(|(n, d)| q(n, d))
}

fn arb_nonzero(h: i64) -> impl Strategy<Value = BigRational> {
    ((1..=h), (1..=h), any::<bool>()).prop_map(|(n, d, neg)| q(if neg { -n } else { n }, d))
}

fn arb_sl2(h: i64) -> impl Strategy<Value = Mat2> {
    (arb_nonzero(h), arb_rational(h), arb_rational(h)).prop_map(|(a, b, c)| {
        let d = (BigRational::from_integer(1.into()) + &b * &c) / &a;
        Mat2::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    })
}

fn arb_field_elem() -> impl Strategy<Value = Scalar> {
    (arb_rational(9), arb_rational(9), prop::sample::select(vec![-3i64, -1, 2, 5, 7]))
        .prop_map(|(a, b, d)| Scalar::new(a, b, BigInt::from(d)))
}

/// A pair sharing the quadratic field of its first element.
fn arb_field_pair() -> impl Strategy<Value = (Scalar, Scalar)> {
    (arb_rational(9), arb_rational(9), arb_rational(9), arb_rational(9), prop::sample::select(vec![-3i64, -1, 2, 5]))
        .prop_map(|(a, b, c, e, d)| (Scalar::new(a, b, d.into()), Scalar::new(c, e, d.into())))
}

/// Conjugated upper triangular pair: reducible, semisimple only when split.
fn arb_reducible() -> impl Strategy<Value = Representation> {
    let eig = prop::sample::select(vec![(1i64, 1i64), (-1, 1), (2, 1), (1, 2), (3, 1), (-1, 3)]);
    (eig.clone(), eig, arb_rational(5), arb_rational(5), -3i64..=3, -3i64..=3).prop_map(|(l, m, s, t, p1, p2)| {
        let p = Mat2::from_ints([[1, p1], [0, 1]]).mul(&Mat2::from_ints([[1, 0], [p2, 1]])).unwrap();
        let tri = |(n, d): (i64, i64), off: BigRational| {
            let l = Scalar::ratio(n, d);
            Mat2::new(l.clone(), off.into(), Scalar::zero(), l.inv()).unwrap()
        };
        let conj = |m: Mat2| p.mul(&m).unwrap().mul(&p.inverse().unwrap()).unwrap();
        Representation::sl2(vec![conj(tri(l, s)), conj(tri(m, t))]).unwrap()
    })
}

fn arb_rep() -> impl Strategy<Value = Representation> {
    prop_oneof![
        (arb_sl2(10), arb_sl2(10)).prop_map(|(a, b)| Representation::sl2(vec![a, b]).unwrap()),
        arb_reducible(),
    ]
}

/// Whether some puncture monodromy of some factor has eigenvalue 1.
fn factor_has_eigenvalue_one(rep: &Representation) -> bool {
    composition_factors(rep).unwrap().iter().any(|f| match &f.monodromies {
        Monodromies::Rank1(v) => v.iter().any(Scalar::is_one),
        Monodromies::Rank2(ms) => ms.iter().any(|m| eig1_multiplicity(m) > 0),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn field_operations_are_exact((a, b) in arb_field_pair()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) * &b.inv(), a.clone());
        }
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn scalars_round_trip_through_text(a in arb_field_elem()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn char_roots_have_the_right_sum_and_product(m in arb_sl2(10)) {
        let (r1, r2) = char_roots(&m).unwrap();
        prop_assert_eq!(&r1 + &r2, m.trace());
        prop_assert!((&r1 * &r2).is_one());
    }

    #[test]
    fn eigenvalue_one_multiplicity(m in arb_sl2(10)) {
        let k = eig1_multiplicity(&m);
        prop_assert_eq!(k == 2, m == Mat2::identity());
        prop_assert_eq!(k == 0, !m.trace().is_int(2));
    }

    #[test]
    fn common_eigenvector_is_shared_and_matches_the_commutator(a in arb_sl2(10), b in arb_sl2(10)) {
        let found = common_eigenvector(&a, &b).unwrap();
        if let Some(v) = &found {
            prop_assert!(a.preserves_line(v).unwrap() && b.preserves_line(v).unwrap());
        }
        // for 2x2 matrices a shared eigenvector exists exactly when det[A,B] = 0
        let comm = a.mul(&b).unwrap().sub(&b.mul(&a).unwrap()).unwrap();
        prop_assert_eq!(found.is_some(), comm.det().is_zero());
    }

    #[test]
    fn additivity_on_reducible_systems(rep in arb_reducible()) {
        let total = pushforward_length(&rep, Pushforward::Star).unwrap();
        let parts: usize = composition_factors(&rep)
            .unwrap()
            .iter()
            .map(|f| pushforward_length(&f.to_representation(false), Pushforward::Star).unwrap())
            .sum();
        prop_assert_eq!(total, parts);
    }

    #[test]
    fn duality_semisimplification_and_range(rep in arb_rep()) {
        let star = pushforward_length(&rep, Pushforward::Star).unwrap();
        prop_assert_eq!(star, pushforward_length(&rep, Pushforward::Shriek).unwrap());
        let ss = semisimplify(&rep).unwrap();
        prop_assert_eq!(star, pushforward_length(&ss, Pushforward::Star).unwrap());
        prop_assert!([1, 2, 3, 4, 6].contains(&star), "{}", star);
    }

    #[test]
    fn intermediate_extension_sandwich(rep in arb_rep()) {
        let ss = semisimplify(&rep).unwrap();
        let ic = ic_length(&ss).unwrap();
        let star = pushforward_length(&rep, Pushforward::Star).unwrap();
        prop_assert!(ic <= star);
        prop_assert_eq!(ic == star, !factor_has_eigenvalue_one(&rep));
    }

    #[test]
    fn traces_round_trip(x in arb_rational(10), y in arb_rational(10), z in arb_rational(10)) {
        let t = TracePoint::new(x.into(), y.into(), z.into());
        match rep_from_traces(&t) {
            Ok(rep) => {
                prop_assert_eq!(trace_coords(&rep).unwrap(), t.clone());
                prop_assert_eq!(pushforward_length(&rep, Pushforward::Star).unwrap(), length_from_traces(&t));
            }
            // only reducible points whose eigenvalues need two different fields
            Err(_) => prop_assert!(perv_core::trace::is_reducible_point(&t)),
        }
    }

    #[test]
    fn stratification_is_correct_and_nested(x in -3i64..6, y in -3i64..6, z in -3i64..6, den in 1i64..4) {
        let t = TracePoint::new(Scalar::ratio(x, den), Scalar::ratio(y, 1), Scalar::ratio(z, den));
        let len = length_from_traces(&t);
        for k in 1..=7 {
            let inside = stratify(k).member(&t.coords()).unwrap();
            prop_assert_eq!(inside, len >= k, "k={}", k);
            if stratify(k + 1).member(&t.coords()).unwrap() {
                prop_assert!(inside);
            }
        }
    }
}

fn arb_coset(b: usize) -> impl Strategy<Value = TorsionCoset> {
    let row = prop::collection::vec(-3i64..=3, b);
    let rhs = prop::sample::select(vec![(0i64, 1i64), (1, 2), (1, 3), (2, 3), (1, 4), (1, 6), (5, 12)]);
    prop::collection::vec((row, rhs), 1..3).prop_map(move |rows| {
        let (eqs, rhs): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        TorsionCoset::from_ints(b, &eqs, &rhs).unwrap()
    })
}

fn arb_point(b: usize) -> impl Strategy<Value = TorsionPoint> {
    prop::collection::vec((0i64..12, prop::sample::select(vec![1i64, 2, 3, 4, 6, 12])), b)
        .prop_map(|v| TorsionPoint::from_ratios(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn torus_connectives_follow_membership(a in arb_coset(2), c in arb_coset(2), p in arb_point(2)) {
        let (fa, fc) = (TorusFormula::coset(a.clone()), TorusFormula::coset(c.clone()));
        let (ia, ic) = (a.contains(&p).unwrap(), c.contains(&p).unwrap());
        prop_assert_eq!(member_torsion(&fa.union(&fc).unwrap(), &p).unwrap(), ia || ic);
        prop_assert_eq!(member_torsion(&fa.intersect(&fc).unwrap(), &p).unwrap(), ia && ic);
        prop_assert_eq!(member_torsion(&fa.complement(), &p).unwrap(), !ia);
        let parts = intersect_cosets(&a, &c).unwrap();
        prop_assert_eq!(parts.iter().any(|x| x.contains(&p).unwrap()), ia && ic);
    }

    #[test]
    fn components_partition_the_coset(a in arb_coset(3), p in arb_point(3)) {
        let parts = a.components().unwrap();
        let hits = parts.iter().filter(|c| c.contains(&p).unwrap()).count();
        prop_assert_eq!(hits, usize::from(a.contains(&p).unwrap()));
    }
}
