use cf_core::cf::{target_cf, CharFn};
use cf_core::invert::gil_pelaez_cdf;
use cf_core::lattice::Convolver;
use cf_core::{fit_rate, Exec, TargetSpec};
use proptest::prelude::*;

fn targets() -> impl Strategy<Value = TargetSpec> {
    prop_oneof![
        Just(TargetSpec::Gaussian),
        (0.2f64..5.0, 0.2f64..5.0).prop_map(|(shape, rate)| TargetSpec::Gamma { shape, rate }),
        (0.2f64..5.0).prop_map(|theta| TargetSpec::GeneralizedDickman { theta }),
        (1.05f64..1.95).prop_map(|alpha| TargetSpec::SymmetricStable { alpha }),
        (prop::collection::vec(0.1f64..3.0, 1..4), prop::collection::vec(1u32..4, 3)).prop_map(|(l, m)| {
            let k = l.len();
            TargetSpec::SecondChaos { lambda: l, m: m[..k].to_vec() }
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_cfs_are_hermitian(spec in targets(), t in -50.0f64..50.0) {
        let cf = target_cf(&spec).unwrap();
        prop_assert!((cf.eval(-t) - cf.eval(t).conj()).norm() <= 1e-12);
        prop_assert!(cf.eval(t).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn normal_sums_stay_normal(mu in -2.0f64..2.0, sd in 0.1f64..3.0, n in 1u32..50, t in -5.0f64..5.0) {
        // Σ of n iid N(μ, σ²) scaled by 1/√n is N(√n μ, σ²)
        let s = CharFn::normal(mu, sd).iid_sum(n, 1.0 / (n as f64).sqrt());
        let direct = CharFn::normal(mu * (n as f64).sqrt(), sd);
        prop_assert!((s.eval(t) - direct.eval(t)).norm() <= 1e-12);
    }

    #[test]
    fn convolved_binomial_matches_closed_form(n in 1usize..40, q in 0.01f64..0.99, t in -20.0f64..20.0) {
        let mut conv = Convolver::new(Exec::Sequential);
        for _ in 0..n {
            conv.add(1, &[1.0 - q, q]);
        }
        let lat = conv.finish(1.0).unwrap();
        prop_assert!((lat.total_mass() - 1.0).abs() <= 1e-12);
        let z = num_complex::Complex64::new(0.0, t).exp();
        let exact = (1.0 - q + q * z).powu(n as u32);
        prop_assert!((lat.cf(t) - exact).norm() <= 1e-11);
    }

    #[test]
    fn rate_fit_recovers_power_law(c in 0.01f64..100.0, slope in -2.0f64..0.5) {
        let pairs: Vec<(f64, f64)> = [10.0, 100.0, 1000.0, 1e4].iter().map(|&n: &f64| (n, c * n.powf(slope))).collect();
        let f = fit_rate(&pairs).unwrap();
        prop_assert!((f.slope - slope).abs() <= 1e-12);
        prop_assert!(f.r2 > 1.0 - 1e-12 && f.r2 <= 1.0);
    }
}

#[test]
fn gil_pelaez_matches_lattice_at_midpoints() {
    let mut conv = Convolver::new(Exec::Sequential);
    for i in 1..=8 {
        let q = 1.0 / i as f64;
        conv.add(i, &[1.0 - q, q]);
    }
    let lat = conv.finish(1.0 / 8.0).unwrap();
    let cdf = lat.cdf();
    let cf = lat.charfn();
    for k in (0..lat.pmf.len() - 1).step_by(3) {
        let x = lat.value(k) + 0.5 * lat.step;
        let v = gil_pelaez_cdf(&cf, x, 50.0, 1e-10).unwrap();
        assert!((v - cdf[k]).abs() <= 1e-9, "k={k}: {v} vs {}", cdf[k]);
    }
}
