use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use veechkit::affine::translation_equivalent;
use veechkit::{corpus, FlatSurface, Mat2, Scalar};

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Elements of `Q(sqrt 2)`, rational about a third of the time.
fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (arb_rational(), arb_rational(), 0u8..3).prop_map(|(a, b, k)| {
        if k == 0 {
            Scalar::from_rational(a)
        } else {
            Scalar::quad(a, b, 2).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Scalar::zero(), a.clone());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
        prop_assert_eq!(&a + &(-&a), Scalar::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.try_recip().unwrap(), Scalar::one());
        }
    }
}

/// Products of elementary shears, all in `SL(2, Z)`.
fn arb_unimodular() -> impl Strategy<Value = Mat2> {
    prop::collection::vec((any::<bool>(), -2i64..=2), 1..5).prop_map(|word| {
        word.into_iter().fold(Mat2::identity(), |m, (upper, k)| {
            let e = if upper { Mat2::ints(1, k, 0, 1) } else { Mat2::ints(1, 0, k, 1) };
            &m * &e
        })
    })
}

fn surfaces() -> Vec<FlatSurface> {
    vec![corpus::torus(), corpus::four_square(), corpus::octagon()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn area_invariance(a in arb_unimodular(), which in 0usize..3) {
        let s = &surfaces()[which];
        prop_assert_eq!(s.apply_matrix(&a).unwrap().area(), s.area());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn matrix_round_trip(a in arb_unimodular(), which in 0usize..3) {
        let s = &surfaces()[which];
        let back = s.apply_matrix(&a).unwrap().apply_matrix(&a.inverse_unimodular()).unwrap();
        let iso = translation_equivalent(s, &back).unwrap();
        prop_assert!(iso.is_some());
        prop_assert!(iso.unwrap().derivative.is_identity());
    }
}
