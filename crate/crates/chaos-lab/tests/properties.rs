use chaos_lab::{cf_diff_bound_integral, cf_envelopes, linear_cap_constant, ChaosParams};
use proptest::prelude::*;

fn chaos_params() -> impl Strategy<Value = ChaosParams> {
    (prop::collection::vec(prop_oneof![0.1f64..3.0, -3.0f64..-0.1], 1..4), prop::collection::vec(1u32..5, 3))
        .prop_map(|(l, m)| {
            let k = l.len();
            ChaosParams::new(l, m[..k].to_vec()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cf_between_envelopes(p in chaos_params(), xi in -30.0f64..30.0) {
        let e = cf_envelopes(&p, xi);
        let v = p.target().cf(xi).norm();
        prop_assert!(e.lower <= v + 1e-10 && v <= e.upper + 1e-10, "{} ≤ {} ≤ {}", e.lower, v, e.upper);
    }

    #[test]
    fn integral_below_linear_cap(p in chaos_params(), xi in 0.0f64..20.0, delta in 1e-4f64..1.0) {
        let b = cf_diff_bound_integral(&p, delta, xi).unwrap();
        prop_assert!(b.integral >= 0.0);
        prop_assert!(b.integral <= b.linear_cap * (1.0 + 1e-9));
        prop_assert!((b.linear_cap - linear_cap_constant(&p) * delta * xi).abs() <= 1e-12 * b.linear_cap.max(1.0));
    }

    #[test]
    fn integral_monotone_in_delta(p in chaos_params(), xi in 0.1f64..10.0, d in 1e-4f64..0.5) {
        let a = cf_diff_bound_integral(&p, d, xi).unwrap().integral;
        let b = cf_diff_bound_integral(&p, 2.0 * d, xi).unwrap().integral;
        prop_assert!(b >= a);
    }
}
