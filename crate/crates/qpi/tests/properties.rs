//! Property tests: scalar ring laws, bar involution, specializations and rendering round trips.

use proptest::prelude::*;
use qpi::scalar::{parse_scalar, QPiScalar};

fn scalar() -> impl Strategy<Value = QPiScalar> {
    prop::collection::vec((-4i64..=4, 0i64..2, -4i64..=4), 0..4).prop_map(|terms| {
        terms.into_iter().fold(QPiScalar::zero(), |acc, (c, a, e)| {
            acc.add(&QPiScalar::from_i64(c).mul(&QPiScalar::pi_q_pow(a, e)))
        })
    })
}

fn fraction() -> impl Strategy<Value = QPiScalar> {
    (scalar(), scalar()).prop_filter_map("nonzero denominator", |(a, b)| a.div(&b).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(x in fraction(), y in fraction(), z in fraction()) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.sub(&x), QPiScalar::zero());
    }

    #[test]
    fn division_inverts_multiplication(x in fraction(), y in fraction()) {
        prop_assume!(!y.is_zero());
        if let Ok(r) = x.div(&y) {
            prop_assert_eq!(r.mul(&y), x);
        }
    }

    #[test]
    fn bar_is_a_ring_involution(x in fraction(), y in fraction()) {
        prop_assert_eq!(x.bar().bar(), x.clone());
        prop_assert_eq!(x.mul(&y).bar(), x.bar().mul(&y.bar()));
        prop_assert_eq!(x.add(&y).bar(), x.bar().add(&y.bar()));
    }

    #[test]
    fn specializations_are_ring_maps(x in fraction(), y in fraction()) {
        for s in [1i8, -1] {
            prop_assert_eq!(x.mul(&y).specialize(s).clone(), x.specialize(s).mul(y.specialize(s)));
            prop_assert_eq!(x.add(&y).specialize(s).clone(), x.specialize(s).add(y.specialize(s)));
        }
    }

    #[test]
    fn pi_squares_to_one(x in fraction()) {
        let p = QPiScalar::pi();
        prop_assert_eq!(p.mul(&p).mul(&x), x);
    }

    #[test]
    fn rendering_round_trips(x in fraction()) {
        prop_assert_eq!(parse_scalar(&x.render()).unwrap(), x);
    }
}
