use proptest::prelude::*;

use qcdim::bounds::{
    exponent_maps, gap_value, gap_value_direct, harnack_interval, BoundMethod, DimensionValue, Distortion, GapKind,
};
use qcdim::fractal::{apply_map, box_dimension, generate_cantor, CantorSpec, ModelMap, DEFAULT_SCALES};
use qcdim::{HPReal, Precision};

fn prec() -> Precision {
    Precision::default()
}

fn hp(v: f64) -> HPReal {
    HPReal::from_f64(v, prec())
}

fn tol() -> HPReal {
    HPReal::pow10(-70, prec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distortion_round_trip(big_k in 1.0f64..1e6) {
        let d = Distortion::from_big_k(hp(big_k)).unwrap();
        let back = Distortion::from_k(d.k().clone()).unwrap();
        prop_assert!((back.K() - &hp(big_k)).abs() <= &tol() * &hp(big_k));
    }

    #[test]
    fn bounds_bracket_input(l in 0.001f64..0.999, big_k in 1.0f64..50.0) {
        let t = DimensionValue::new(hp(l)).unwrap();
        let d = Distortion::from_big_k(hp(big_k)).unwrap();
        let slack = tol();
        for m in BoundMethod::ALL {
            let b = m.evaluate(&t, &d).unwrap();
            prop_assert!(&b.lower - t.value() <= slack, "{} lower above L", m.as_str());
            prop_assert!(t.value() - &b.upper <= slack, "{} upper below L", m.as_str());
            prop_assert!(!b.lower.is_negative());
        }
    }

    #[test]
    fn improved_bounds_never_worse(l in 0.001f64..0.999, big_k in 1.0f64..50.0) {
        let t = DimensionValue::new(hp(l)).unwrap();
        let d = Distortion::from_big_k(hp(big_k)).unwrap();
        let a = BoundMethod::Astala.evaluate(&t, &d).unwrap();
        let lo = BoundMethod::ImprovedLower.evaluate(&t, &d).unwrap();
        let up = BoundMethod::ImprovedUpper.evaluate(&t, &d).unwrap();
        prop_assert!(&a.lower - &lo.lower <= tol());
        prop_assert!(&up.upper - &a.upper <= tol());
    }

    #[test]
    fn exponent_duality(t in 0.0f64..=1.0, k in 0.0f64..0.999) {
        let k = hp(k);
        let t = DimensionValue::new(hp(t).max(HPReal::pow10(-30, prec()))).unwrap();
        let (_, t_star) = exponent_maps(&t, &k).unwrap();
        let (back, _) = exponent_maps(&DimensionValue::new(t_star).unwrap(), &k).unwrap();
        prop_assert!((&back - t.value()).abs() <= tol());
    }

    #[test]
    fn harnack_product(v0 in 0.0f64..1e3, y in -0.999f64..0.999) {
        let v0 = hp(v0);
        let (lo, hi) = harnack_interval(&v0, &hp(y)).unwrap();
        prop_assert!(lo <= hi);
        let v0_sq = v0.square();
        prop_assert!((&(&lo * &hi) - &v0_sq).abs() <= &tol() * &(&v0_sq + &HPReal::one(prec())));
    }

    #[test]
    fn factored_gaps_match_direct(k2 in 1e-3f64..0.5, l in 0.01f64..0.99) {
        // At these k2 the direct difference keeps over 70 digits.
        let (k2, l) = (hp(k2), hp(l));
        for kind in [GapKind::G0, GapKind::G1] {
            let f = gap_value(kind, &k2, &l);
            let d = gap_value_direct(kind, &k2, &l);
            prop_assert!((&f - &d).abs() <= HPReal::pow10(-60, prec()), "{kind}");
        }
    }

    #[test]
    fn affine_invariance(a in prop_oneof![-4.0f64..-0.25, 0.25f64..4.0], b in -10.0f64..10.0, idx in 0usize..3) {
        let spec = [(2, 1.0 / 3.0, 12), (2, 0.25, 10), (3, 0.2, 8)][idx];
        let cover = generate_cantor(&CantorSpec::new(spec.0, spec.1, spec.2).unwrap()).unwrap();
        let base = box_dimension(&cover, DEFAULT_SCALES).unwrap().value;
        let mapped = apply_map(&ModelMap::affine(a, b).unwrap(), &cover).unwrap();
        prop_assert_eq!(mapped.len(), cover.len());
        mapped.check().unwrap();
        prop_assert!((box_dimension(&mapped, DEFAULT_SCALES).unwrap().value - base).abs() <= 0.01);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn estimator_calibration(case in 0usize..4, extra in 0u32..3) {
        // (pieces, target dimension, smallest depth with m^n >= 1e4)
        let (m, d, n0) = [(2u32, 0.2, 8u32), (2, 0.5, 14), (2, 2f64.ln() / 3f64.ln(), 14), (2, 0.9, 14)][case];
        // d = 0.2 stays at depth 8: deeper levels fall below f64 resolution.
        let n = if case == 0 { n0 } else { n0 + extra };
        let r = (m as f64).powf(-1.0 / d);
        let spec = CantorSpec::new(m, r, n).unwrap();
        let est = box_dimension(&generate_cantor(&spec).unwrap(), DEFAULT_SCALES).unwrap().value;
        prop_assert!((est - d).abs() <= 0.03, "{spec}: {est} vs {d}");
    }

    #[test]
    fn power_stretch_keeps_count_and_order(a in 1.0f64..5.0, offset in 0.5f64..4.0) {
        let spec = CantorSpec::placed(3, 0.2, 6, offset, 1.0).unwrap();
        let cover = generate_cantor(&spec).unwrap();
        let mapped = apply_map(&ModelMap::power(a).unwrap(), &cover).unwrap();
        prop_assert_eq!(mapped.len(), cover.len());
        mapped.check().unwrap();
    }
}
