use cf_core::Exec;
use chaos_lab::{
    ncgamma_moment_bound, sample_moments, ustat_delta_bound, ustat_delta_bound_cs, ustat_exact_moments, ustat_sample,
    MomentEstimates, UStatConfig,
};

/// The moment-bound radicand in raw moments, term by term, with no cancellation.
fn ncgamma_radicand(nu: f64, m: &MomentEstimates) -> f64 {
    let n4 = nu.powi(4);
    (nu * nu - 0.5 * m.m2) * m.m2 + 4.0 * n4 - 0.5 * nu * m.m3 - 2.5 * n4 + m.m4 / 24.0 + 0.375 * (m.m2 * m.m2 - 4.0 * n4)
}

#[test]
fn ncgamma_route_at_exact_moments() {
    for n in [100, 1000, 10_000] {
        let ex = ustat_exact_moments(1.0, n);
        let b = ncgamma_moment_bound(1.0, &ex).unwrap();
        let direct = ncgamma_radicand(1.0, &ex).sqrt() + (1.0 - 0.5 * ex.m2).abs();
        assert!((b - direct).abs() <= 1e-9 * direct, "n={n}: {b} vs {direct}");
        // the moment route keeps the √2 from Cauchy–Schwarz
        let cs = ustat_delta_bound_cs(1.0, n).unwrap();
        assert!((b / cs - 1.0).abs() <= 0.02, "n={n}: {b} vs {cs}");
    }
    let ex = ustat_exact_moments(1.0, 10_000);
    let ratio = ncgamma_moment_bound(1.0, &ex).unwrap() / ustat_delta_bound(1.0, 10_000).unwrap();
    assert!((ratio - 2f64.sqrt()).abs() <= 0.01, "ratio {ratio}");
}

#[test]
fn ncgamma_route_from_monte_carlo_moments() {
    let cfg = UStatConfig::new(1.0, 100, 21).unwrap();
    let xs = ustat_sample(&cfg, 1_000_000, Exec::default());
    let mc = sample_moments(&xs, Exec::default()).estimates();
    let ex = ustat_exact_moments(1.0, 100);
    // delta method: influence of one draw on the radicand
    let c2 = 1.0 - 0.25 * mc.m2;
    let infl: Vec<f64> = xs.iter().map(|&f| c2 * f * f - 0.5 * f.powi(3) + f.powi(4) / 24.0).collect();
    let mean = infl.iter().sum::<f64>() / infl.len() as f64;
    let var = infl.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (infl.len() - 1) as f64;
    let se = (var / infl.len() as f64).sqrt();
    let (r_mc, r_ex) = (ncgamma_radicand(1.0, &mc), ncgamma_radicand(1.0, &ex));
    assert!((r_mc - r_ex).abs() <= 4.0 * se, "radicand {r_mc} vs {r_ex}, se {se}");
}
