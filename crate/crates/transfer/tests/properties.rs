use proptest::prelude::*;
use transfer::{
    esseen_kolmogorov_bound, poly_validity_threshold, smooth_wasserstein_bound_exp, smooth_wasserstein_bound_poly,
    CfBoundHypothesis, Polynomial, SubExponential,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn esseen_bound_monotone(m in 0.01f64..5.0, t in 0.5f64..100.0, c in 0.0f64..1.0) {
        let a = esseen_kolmogorov_bound(|s| c * s, m, t).unwrap();
        let b = esseen_kolmogorov_bound(|s| c * s, 2.0 * m, t).unwrap();
        let d = esseen_kolmogorov_bound(|s| 2.0 * c * s, m, t).unwrap();
        prop_assert!(a >= 0.0 && b >= a && d >= a);
    }

    #[test]
    fn wasserstein_bound_grows_with_epsilon(eps in 1e-6f64..0.1, p in 0u32..3) {
        let h2 = SubExponential::new(2.0, 0.5, 1.0).unwrap();
        let a = smooth_wasserstein_bound_exp(&CfBoundHypothesis::new(1.0, p, eps).unwrap(), &h2).unwrap();
        let b = smooth_wasserstein_bound_exp(&CfBoundHypothesis::new(1.0, p, 2.0 * eps).unwrap(), &h2).unwrap();
        prop_assert!(a > 0.0 && b > a);
    }

    #[test]
    fn poly_gate_is_sharp(p in 0u32..3, gamma in 0.2f64..3.0, c in 0.1f64..10.0) {
        let h2 = Polynomial::new(c, gamma).unwrap();
        let thr = poly_validity_threshold(&CfBoundHypothesis::new(1.0, p, 0.5).unwrap().into(), &h2).unwrap();
        prop_assume!(thr < 1.0);
        let below = CfBoundHypothesis::new(1.0, p, thr * (1.0 - 1e-6)).unwrap();
        let above = CfBoundHypothesis::new(1.0, p, (thr * (1.0 + 1e-6)).min(1.0 - 1e-12)).unwrap();
        prop_assert!(smooth_wasserstein_bound_poly(&below, &h2).unwrap() > 0.0);
        prop_assert!(smooth_wasserstein_bound_poly(&above, &h2).is_err());
    }
}
