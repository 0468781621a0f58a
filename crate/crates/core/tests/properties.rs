use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use ellext::census::PrimeCensus;
use ellext::counting::{exact_counts_dp, exact_counts_series};
use ellext::lfunc::{build_f_series, g_series_from_f, g_series_product};
use ellext::series::TruncatedSeries;
use ellext::tauberian::{AsymptoticModel, PoleData};
use ellext::FieldParams;

fn series_with_unit_constant() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(-9i64..=9, 1..12).prop_map(|tail| {
        let mut c = vec![1i64];
        c.extend(tail);
        TruncatedSeries::from_integers(c, 1)
    })
}

fn field() -> impl Strategy<Value = FieldParams> {
    prop::sample::select(vec![(2u64, 3u64), (2, 5), (3, 2), (3, 5), (4, 3), (4, 5), (5, 2), (5, 3), (7, 3), (8, 3), (9, 2)])
        .prop_map(|(q, ell)| FieldParams::new(q, ell).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_is_two_sided(s in series_with_unit_constant()) {
        let inv = s.invert().unwrap();
        prop_assert_eq!(s.checked_mul(&inv).unwrap(), TruncatedSeries::one(s.order(), 1));
    }

    #[test]
    fn recurrence_power_matches_repeated_products(s in series_with_unit_constant(), m in -4i64..=6) {
        prop_assert_eq!(s.pow_big(&BigInt::from(m)).unwrap(), s.pow_int(m).unwrap());
    }

    #[test]
    fn series_and_knapsack_agree(params in field(), n in 1usize..=12) {
        let census = PrimeCensus::new(params.q, params.alpha * n as u32).unwrap();
        let s = exact_counts_series(&params, &census, n).unwrap();
        let d = exact_counts_dp(&params, &census, n).unwrap();
        prop_assert_eq!(s.values(), d.values());
    }

    #[test]
    fn both_routes_to_g_agree(params in field()) {
        let order = 10;
        let census = PrimeCensus::new(params.q, params.alpha * order as u32).unwrap();
        let f = build_f_series(&params, &census, order).unwrap();
        prop_assert_eq!(g_series_from_f(&params, &f).unwrap(), g_series_product(&params, &census, order).unwrap());
    }

    #[test]
    fn scaled_pole_scales_the_predictor(q in 2u64..=7, w in 1u32..=3, k in 1i64..=20) {
        // k (1 - q u)^{-w} predicts k times the predictor of (1 - q u)^{-w}
        let order = 20;
        let base = TruncatedSeries::from_poly(&[BigRational::one(), BigRational::from_integer(BigInt::from(-(q as i64)))], order, 1)
            .pow_int(-(w as i64))
            .unwrap();
        let pole = PoleData::new(q, 1, w).unwrap();
        let kk = BigRational::from_integer(BigInt::from(k));
        let plain = AsymptoticModel::from_series(&base, pole, &BigRational::zero()).unwrap();
        let scaled = AsymptoticModel::from_series(&base.scale_by(&kk), pole, &BigRational::zero()).unwrap();
        for (a, b) in plain.q_coeffs.iter().zip(&scaled.q_coeffs) {
            prop_assert_eq!(&a.value * &kk, b.value.clone());
        }
    }
}
