//! Second-Wiener-chaos targets Σλₖ(χ²_{mₖ} − mₖ): symbols, CF envelopes, the
//! Δₙ-driven CF bound and the degenerate U-statistic experiment.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared as ChiSquaredDist, ContinuousCDF};

use cf_core::cf::{empirical_cf, target_cf, CharFn, Provenance, TargetSpec};
use cf_core::error::{Error, Result};
use cf_core::invert::{ecdf_kolmogorov, InversionTable};
use cf_core::par::{map_range, map_slice, Exec};
use cf_core::quad::{integrate, QuadOptions};
use cf_core::rate::{fit_rate, RateFit};
use cf_core::report::BoundReport;
use cf_core::rng::{fill_samples, label, CHUNK};
use transfer::{esseen_kolmogorov_bound, estimate_subexp_tail, smooth_wasserstein_bound_exp, CfBoundHypothesis};

/// Coefficients λ (pairwise distinct, nonzero) with multiplicities m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosParams {
    pub lambda: Vec<f64>,
    pub m: Vec<u32>,
}

impl ChaosParams {
    pub fn new(lambda: Vec<f64>, m: Vec<u32>) -> Result<Self> {
        let p = ChaosParams { lambda, m };
        p.target().validate()?;
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.lambda.len()
    }

    pub fn q(&self) -> u32 {
        self.m.iter().sum()
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min)
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// ⟨m, λ⟩.
    pub fn m_dot_lambda(&self) -> f64 {
        self.lambda.iter().zip(&self.m).map(|(l, m)| l * *m as f64).sum()
    }

    pub fn target(&self) -> TargetSpec {
        TargetSpec::SecondChaos { lambda: self.lambda.clone(), m: self.m.clone() }
    }

    /// E e^{γF} for the target F (∞ outside the domain).
    pub fn mgf(&self, g: f64) -> f64 {
        let mut log = 0.0;
        for (l, m) in self.lambda.iter().zip(&self.m) {
            let a = 1.0 - 2.0 * g * l;
            if a <= 0.0 {
                return f64::INFINITY;
            }
            log += *m as f64 * (-g * l - 0.5 * a.ln());
        }
        log.exp()
    }
}

/// (σ_A(ξ), σ_B(ξ)) with σ_A = Π(1/(2λₖ) − iξ) and
/// σ_B = Σ (mₖ/2) Π_{l≠k}(1/(2λ_l) − iξ).
pub fn symbols(p: &ChaosParams, xi: f64) -> (Complex64, Complex64) {
    let f: Vec<Complex64> = p.lambda.iter().map(|l| Complex64::new(0.5 / l, -xi)).collect();
    let a = f.iter().product();
    let b = (0..f.len())
        .map(|k| {
            let rest: Complex64 = f.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, v)| *v).product();
            0.5 * p.m[k] as f64 * rest
        })
        .sum();
    (a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfEnvelope {
    pub lower: f64,
    pub upper: f64,
    /// Upper bound for 1/|σ_A(ξ)|.
    pub sigma_a_inv_bound: f64,
}

pub fn cf_envelopes(p: &ChaosParams, xi: f64) -> CfEnvelope {
    let q = p.q() as f64;
    let (lmin, lmax) = (p.lambda_min(), p.lambda_max());
    let x2 = xi * xi;
    let prod: f64 = p.lambda.iter().map(|l| 2.0 * l.abs()).product();
    CfEnvelope {
        lower: (1.0 + 4.0 * lmax * lmax * x2).powf(-q / 4.0),
        upper: (1.0 + 4.0 * lmin * lmin * x2).powf(-q / 4.0),
        sigma_a_inv_bound: prod / (1.0 + 4.0 * lmin * lmin * x2).powf(p.d() as f64 / 2.0),
    }
}

/// C_{d,λ} with (1+|s|)^d/|σ_A(s)φ∞(s)|·|φ∞(ξ)| ≤ C_{d,λ} for |s| ≤ |ξ|, from the
/// envelope chain: 2^dΠ|λ|·(λmax/λmin)^{q/2}·(√2·max(1, 1/(2λmin)))^d.
pub fn linear_cap_constant(p: &ChaosParams) -> f64 {
    let (lmin, lmax) = (p.lambda_min(), p.lambda_max());
    let d = p.d() as i32;
    let prod: f64 = p.lambda.iter().map(|l| 2.0 * l.abs()).product();
    prod * (lmax / lmin).powf(p.q() as f64 / 2.0) * (2f64.sqrt() * 1f64.max(0.5 / lmin)).powi(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChaosCfBound {
    /// Δₙ|φ∞(ξ)|∫₀^{|ξ|}(1+s)^d/|σ_A(s)φ∞(s)| ds.
    pub integral: f64,
    /// C_{d,λ}·Δₙ·|ξ|.
    pub linear_cap: f64,
}

pub fn cf_diff_bound_integral(p: &ChaosParams, delta_n: f64, xi: f64) -> Result<ChaosCfBound> {
    if !(delta_n >= 0.0 && delta_n.is_finite()) {
        return Err(Error::domain(format!("delta_n must be ≥ 0 (got {delta_n})")));
    }
    let x = xi.abs();
    let linear_cap = linear_cap_constant(p) * delta_n * x;
    if x == 0.0 || delta_n == 0.0 {
        return Ok(ChaosCfBound { integral: 0.0, linear_cap });
    }
    let target = p.target();
    let top = target.log_cf(x).re;
    let d = p.d() as i32;
    let r = integrate(
        |s: f64| (1.0 + s).powi(d) * (top - target.log_cf(s).re).exp() / symbols(p, s).0.norm(),
        0.0,
        x,
        QuadOptions::new(1e-13).rel(1e-11),
    )?;
    Ok(ChaosCfBound { integral: delta_n * r.value, linear_cap })
}

/// sup of the target density (requires q ≥ 3): inverted density maximised on
/// a grid, inflated 5%, plus the CF tail mass beyond the truncation.
pub fn chaos_density_bound(p: &ChaosParams, exec: Exec) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<String, f64>>> = OnceLock::new();
    let q = p.q() as f64;
    if q < 3.0 {
        return Err(Error::domain(format!("density bound needs q ≥ 3 (got {q})")));
    }
    let key = format!("{:?}", p);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().ok().and_then(|c| c.get(&key).copied()) {
        return Ok(v);
    }
    let t_cut = 2e4;
    let cf = target_cf(&p.target())?;
    let tab = InversionTable::new(&cf, t_cut, 1.0, exec)?;
    let sd = (2.0 * p.lambda.iter().zip(&p.m).map(|(l, m)| *m as f64 * l * l).sum::<f64>()).sqrt();
    let reach = p.lambda.iter().zip(&p.m).map(|(l, m)| l.abs() * *m as f64).sum::<f64>() + 8.0 * sd;
    let h = sd / 200.0;
    let count = (2.0 * reach / h) as usize + 1;
    let xs: Vec<f64> = (0..count).map(|k| -reach + h * k as f64).collect();
    // (1/π)∫_T^∞ (2λmin t)^{−q/2} dt
    let tail = (2.0 * p.lambda_min()).powf(-q / 2.0) * t_cut.powf(1.0 - q / 2.0) / (q / 2.0 - 1.0) / PI;
    let m = 1.05 * tab.density_max(&xs) + tail;
    if let Ok(mut c) = cache.lock() {
        c.insert(key, m);
    }
    Ok(m)
}

/// W₂ (and for q ≥ 3 Kolmogorov) bounds from a given Δₙ.
pub fn chaos_distance_bounds(p: &ChaosParams, delta_n: f64, exec: Exec) -> Result<BoundReport> {
    if !(delta_n > 0.0 && delta_n < 1.0) {
        return Err(Error::domain(format!("delta_n must lie in (0, 1) (got {delta_n})")));
    }
    let cap = linear_cap_constant(p);
    let mut r = BoundReport::new(0, delta_n, delta_n, 2);
    let h1 = CfBoundHypothesis::new(cap, 1, delta_n)?;
    let g0 = 0.25 / p.lambda_max();
    let tail = estimate_subexp_tail(|g| p.mgf(g) + p.mgf(-g), &[g0])?;
    r.w_bound = Some(smooth_wasserstein_bound_exp(&h1, &tail)?);
    r.note("c_d_lambda", cap).note("tail_c", tail.c).note("tail_lambda", tail.lambda);
    r.note("tails", "approximant tails taken equal to the target two-sided mgf bound");
    if p.q() >= 3 {
        let m = chaos_density_bound(p, exec)?;
        let t_cut = 1.0 / delta_n.sqrt();
        r.kol_bound = Some(esseen_kolmogorov_bound(|_| cap * delta_n, m, t_cut)?);
        r.note("t_cut", t_cut).note("density_bound", m);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UStatConfig {
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
}

impl UStatConfig {
    /// Sampling needs n ≥ 2; the Δₙ formula needs n ≥ 4.
    pub fn new(alpha: f64, n: usize, seed: u64) -> Result<Self> {
        if !(alpha != 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be nonzero (got {alpha})")));
        }
        if n < 2 {
            return Err(Error::domain(format!("U-statistic needs n ≥ 2 (got {n})")));
        }
        Ok(UStatConfig { alpha, n, seed })
    }
}

/// (2α/(n−1))Σ_{i<j} z_i z_j = α[(Σz)² − Σz²]/(n−1).
pub fn ustat_from_normals(alpha: f64, z: &[f64]) -> f64 {
    let (s, s2) = z.iter().fold((0.0, 0.0), |(s, s2), x| (s + x, s2 + x * x));
    alpha * (s * s - s2) / (z.len() as f64 - 1.0)
}

/// `reps` draws of nU_n from n fresh standard normals each (O(n) per draw).
pub fn ustat_sample(cfg: &UStatConfig, reps: usize, exec: Exec) -> Vec<f64> {
    let (alpha, n) = (cfg.alpha, cfg.n);
    fill_samples(exec, reps, cfg.seed, label("ustat") ^ n as u64, move |rng| {
        let mut s = 0.0;
        let mut s2 = 0.0;
        for _ in 0..n {
            let z: f64 = StandardNormal.sample(rng);
            s += z;
            s2 += z * z;
        }
        alpha * (s * s - s2) / (n as f64 - 1.0)
    })
}

/// Draws with the law of nU_n in O(1): α(N² − Q/(n−1)), N ~ N(0,1) and
/// Q ~ χ²_{n−1} independent.
pub fn ustat_sample_reduced(cfg: &UStatConfig, reps: usize, exec: Exec) -> Result<Vec<f64>> {
    let m = cfg.n as f64 - 1.0;
    let chi = ChiSquared::new(m).map_err(|e| Error::domain(e.to_string()))?;
    let alpha = cfg.alpha;
    Ok(fill_samples(exec, reps, cfg.seed, label("ustat-reduced") ^ cfg.n as u64, move |rng| {
        let z: f64 = StandardNormal.sample(rng);
        alpha * (z * z - chi.sample(rng) / m)
    }))
}

/// CF of nU_n: (1 − 2iαt)^{−1/2}(1 + 2iαt/(n−1))^{−(n−1)/2}.
pub fn ustat_exact_cf(alpha: f64, n: usize) -> CharFn {
    let m = n as f64 - 1.0;
    let log = move |t: f64| {
        -0.5 * Complex64::new(1.0, -2.0 * alpha * t).ln() - 0.5 * m * Complex64::new(1.0, 2.0 * alpha * t / m).ln()
    };
    let d = move |t: f64| {
        Complex64::new(0.0, alpha) / Complex64::new(1.0, -2.0 * alpha * t)
            - Complex64::new(0.0, alpha) / Complex64::new(1.0, 2.0 * alpha * t / m)
    };
    CharFn::new(move |t| log(t).exp(), Provenance::Exact).with_deriv(move |t| d(t) * log(t).exp())
}

/// κ₂(nU_n) = α²·2n/(n−1).
pub fn ustat_kappa2(alpha: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("kappa2 needs n ≥ 2 (got {n})")));
    }
    let n = n as f64;
    Ok(alpha * alpha * 2.0 * n / (n - 1.0))
}

/// α²√(n(n−3)/(n−1)³) + |α|/(n−1).
pub fn ustat_delta_bound(alpha: f64, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::domain(format!("delta bound needs n ≥ 4 (got {n})")));
    }
    let x = n as f64;
    Ok(alpha * alpha * (x * (x - 3.0) / (x - 1.0).powi(3)).sqrt() + alpha.abs() / (x - 1.0))
}

/// The same bound with the Cauchy–Schwarz factor √2 kept:
/// α²√(2n(n−3)/(n−1)³) + |α|/(n−1).
pub fn ustat_delta_bound_cs(alpha: f64, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::domain(format!("delta bound needs n ≥ 4 (got {n})")));
    }
    let x = n as f64;
    Ok(alpha * alpha * (2.0 * x * (x - 3.0) / (x - 1.0).powi(3)).sqrt() + alpha.abs() / (x - 1.0))
}

/// Raw moments E F², E F³, E F⁴.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimates {
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

/// Radicand tolerance before [`Error::InconsistentMoments`] is raised.
pub const RADICAND_TOL: f64 = 1e-9;

/// √(E[(ν² − ½EF²)F² + 4ν⁴ − (ν/2)F³ − (5/2)ν⁴ + F⁴/24] + (3/8)((EF²)² − 4ν⁴))
/// + |ν² − ½EF²|, with the expectation reduced to the supplied moments.
///
/// The radicand is evaluated in deviations dₖ from the target moments
/// (2ν², 8ν³, 60ν⁴), where it reads ν²d₂/2 − d₂²/8 − νd₃/2 + d₄/24; deviations
/// within a few ulps of the target moment are treated as zero so that target
/// moments give exactly 0 despite the square root.
pub fn ncgamma_moment_bound(nu: f64, mo: &MomentEstimates) -> Result<f64> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::domain(format!("nu must be positive (got {nu})")));
    }
    if !(mo.m2 > 0.0 && mo.m2.is_finite() && mo.m3.is_finite() && mo.m4.is_finite()) {
        return Err(Error::domain("moment estimates must be finite with E F² > 0"));
    }
    let dev = |m: f64, target: f64| {
        let d = m - target;
        if d.abs() <= 16.0 * f64::EPSILON * target.abs() {
            0.0
        } else {
            d
        }
    };
    let n2 = nu * nu;
    let d2 = dev(mo.m2, 2.0 * n2);
    let d3 = dev(mo.m3, 8.0 * n2 * nu);
    let d4 = dev(mo.m4, 60.0 * n2 * n2);
    let rad = 0.5 * n2 * d2 - 0.125 * d2 * d2 - 0.5 * nu * d3 + d4 / 24.0;
    if rad < -RADICAND_TOL {
        return Err(Error::InconsistentMoments(rad));
    }
    Ok(rad.max(0.0).sqrt() + 0.5 * d2.abs())
}

/// Exact raw moments of nU_n (cumulants of α(χ²₁ − 1) − α(χ²_m/m − 1)).
pub fn ustat_exact_moments(alpha: f64, n: usize) -> MomentEstimates {
    let m = n as f64 - 1.0;
    let k2 = 2.0 * alpha.powi(2) * (1.0 + 1.0 / m);
    let k3 = 8.0 * alpha.powi(3) * (1.0 - 1.0 / (m * m));
    let k4 = 48.0 * alpha.powi(4) * (1.0 + 1.0 / m.powi(3));
    MomentEstimates { m2: k2, m3: k3, m4: k4 + 3.0 * k2 * k2 }
}

/// Single-pass power sums with Neumaier compensation; merges associatively.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MomentAccumulator {
    count: u64,
    sums: [(f64, f64); 4],
}

impl MomentAccumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let mut p = 1.0;
        for s in self.sums.iter_mut() {
            p *= x;
            neumaier(s, p);
        }
    }

    pub fn merge(&mut self, o: &MomentAccumulator) {
        self.count += o.count;
        for (s, t) in self.sums.iter_mut().zip(&o.sums) {
            neumaier(s, t.0);
            neumaier(s, t.1);
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// E X^k for k = 1..4.
    pub fn raw(&self, k: usize) -> f64 {
        let (s, c) = self.sums[k - 1];
        (s + c) / self.count as f64
    }

    pub fn estimates(&self) -> MomentEstimates {
        MomentEstimates { m2: self.raw(2), m3: self.raw(3), m4: self.raw(4) }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.count as f64;
        let mean = self.raw(1);
        (self.raw(2) - mean * mean) * n / (n - 1.0)
    }

    /// Standard error of the sample variance (large-sample, via the fourth
    /// central moment).
    pub fn variance_stderr(&self) -> f64 {
        let n = self.count as f64;
        let mu = self.raw(1);
        let c2 = self.raw(2) - mu * mu;
        let c4 = self.raw(4) - 4.0 * mu * self.raw(3) + 6.0 * mu * mu * self.raw(2) - 3.0 * mu.powi(4);
        ((c4 - c2 * c2) / n).max(0.0).sqrt()
    }
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

/// Moments of a sample, accumulated per chunk and merged in order.
pub fn sample_moments(xs: &[f64], exec: Exec) -> MomentAccumulator {
    let parts = map_range(exec, xs.len().div_ceil(CHUNK), |k| {
        let mut a = MomentAccumulator::default();
        for &x in &xs[k * CHUNK..((k + 1) * CHUNK).min(xs.len())] {
            a.push(x);
        }
        a
    });
    parts.iter().fold(MomentAccumulator::default(), |mut a, p| {
        a.merge(p);
        a
    })
}

/// Above this many normals per experiment row the reduced sampler is used.
pub const DIRECT_SAMPLING_LIMIT: usize = 50_000_000;

#[derive(Debug, Clone)]
pub struct UStatExperiment {
    pub reports: Vec<BoundReport>,
    /// Per n: rows (t, |φ_emp − φ∞|, integral bound, stderr, |φ_n − φ∞| exact).
    pub curves: Vec<(usize, Vec<Vec<f64>>)>,
    pub fits: BTreeMap<String, RateFit>,
}

/// Target CDF of α(Z² − 1).
fn ustat_target_cdf(alpha: f64) -> impl Fn(f64) -> f64 {
    let chi = ChiSquaredDist::new(1.0).expect("one degree of freedom");
    move |x: f64| {
        let y = x / alpha + 1.0;
        let c = if y <= 0.0 { 0.0 } else { chi.cdf(y) };
        if alpha > 0.0 {
            c
        } else {
            1.0 - c
        }
    }
}

pub fn ustat_experiment(alpha: f64, n_grid: &[usize], reps: usize, t_grid: &[f64], seed: u64, exec: Exec) -> Result<UStatExperiment> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("n grid must be nonempty and strictly increasing"));
    }
    if reps < 2 {
        return Err(Error::domain("need at least 2 replications"));
    }
    let params = ChaosParams::new(vec![alpha], vec![1])?;
    let target = target_cf(&params.target())?;
    let g = ustat_target_cdf(alpha);
    let mut reports = Vec::new();
    let mut curves = Vec::new();
    for &n in n_grid {
        let cfg = UStatConfig::new(alpha, n, seed)?;
        let delta = ustat_delta_bound(alpha, n)?;
        let mut r = if delta < 1.0 {
            let mut r = chaos_distance_bounds(&params, delta, exec)?;
            r.n = n as u64;
            r
        } else {
            let mut r = BoundReport::new(n as u64, delta, delta, 2);
            r.note("w_bound_skipped", format!("delta_n = {delta} ≥ 1"));
            r
        };
        let direct = n.saturating_mul(reps) <= DIRECT_SAMPLING_LIMIT;
        let mut xs = if direct { ustat_sample(&cfg, reps, exec) } else { ustat_sample_reduced(&cfg, reps, exec)? };
        r.note("sampler", if direct { "direct" } else { "reduced (equal in law)" });
        r.note("reps", reps as u64);

        let mo = sample_moments(&xs, exec);
        let k2 = ustat_kappa2(alpha, n)?;
        r.note("kappa2_exact", k2).note("kappa2_mc", mo.variance()).note("kappa2_stderr", mo.variance_stderr());
        if let Ok(b) = ncgamma_moment_bound(alpha.abs(), &mo.estimates()) {
            r.note("ncgamma_bound_mc", b);
        }
        r.note("delta_n_cs", ustat_delta_bound_cs(alpha, n)?);

        let exact = ustat_exact_cf(alpha, n);
        let rows = map_slice(exec, t_grid, |&t| -> Result<Vec<f64>> {
            let (e, se) = empirical_cf(&xs, t)?;
            let b = cf_diff_bound_integral(&params, delta, t)?;
            let tv = target.eval(t);
            Ok(vec![t, (e - tv).norm(), b.integral, se, (exact.eval(t) - tv).norm()])
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let worst = rows.iter().map(|row| row[1] - row[2] - 4.0 * row[3]).fold(f64::NEG_INFINITY, f64::max);
        r.note("dominance_pass", worst <= 0.0).note("dominance_worst_excess", worst);

        xs.sort_by(f64::total_cmp);
        r.kol_empirical = Some(ecdf_kolmogorov(&xs, &g));
        r.note("kol_empirical_method", "ECDF vs exact chi-square CDF");
        reports.push(r);
        curves.push((n, rows));
    }
    let mut fits = BTreeMap::new();
    if reports.len() >= 3 {
        let pairs: Vec<(f64, f64)> = reports.iter().map(|r| (r.n as f64, r.delta_n)).collect();
        fits.insert("delta_n".to_string(), fit_rate(&pairs)?);
        if let Some(pairs) = reports.iter().map(|r| r.w_bound.map(|w| (r.n as f64, w))).collect::<Option<Vec<_>>>() {
            fits.insert("w_bound".to_string(), fit_rate(&pairs)?);
        }
    }
    for r in reports.iter_mut() {
        for (k, f) in &fits {
            r.note(&format!("slope_{k}"), f.slope);
        }
    }
    Ok(UStatExperiment { reports, curves, fits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symbol_examples() {
        let p = ChaosParams::new(vec![1.0], vec![1]).unwrap();
        let (a, b) = symbols(&p, 0.0);
        assert_abs_diff_eq!(a.re, 0.5);
        assert_abs_diff_eq!(b.re, 0.5);
        let (_, b) = symbols(&p, 3.7);
        assert_eq!(b, Complex64::new(0.5, 0.0));
    }

    #[test]
    fn symbol_log_derivative() {
        let p = ChaosParams::new(vec![0.7, -1.3, 2.0], vec![2, 1, 3]).unwrap();
        let spec = p.target();
        for k in 0..=40 {
            let xi = -10.0 + 0.5 * k as f64;
            let (a, b) = symbols(&p, xi);
            let lhs = Complex64::new(0.0, -p.m_dot_lambda()) + Complex64::new(0.0, 1.0) * b / a;
            assert!((lhs - spec.log_deriv(xi)).norm() < 1e-9);
        }
    }

    #[test]
    fn envelope_examples() {
        let p = ChaosParams::new(vec![1.0], vec![1]).unwrap();
        let e = cf_envelopes(&p, 0.0);
        assert_eq!((e.lower, e.upper), (1.0, 1.0));
        let e = cf_envelopes(&p, 1.0);
        assert_abs_diff_eq!(e.lower, 5f64.powf(-0.25), epsilon = 1e-15);
        assert_abs_diff_eq!(e.upper, 5f64.powf(-0.25), epsilon = 1e-15);
        let p = ChaosParams::new(vec![1.0, -2.0], vec![1, 1]).unwrap();
        let e = cf_envelopes(&p, 2.0);
        let v = p.target().cf(2.0).norm();
        assert!(e.lower <= v && v <= e.upper);
        assert!(e.sigma_a_inv_bound >= 1.0 / symbols(&p, 2.0).0.norm());
    }

    #[test]
    fn integral_bound_examples() {
        let p = ChaosParams::new(vec![1.0], vec![1]).unwrap();
        assert_eq!(cf_diff_bound_integral(&p, 1.0, 0.0).unwrap().integral, 0.0);
        for k in 0..=80 {
            let xi = -20.0 + 0.5 * k as f64;
            let b = cf_diff_bound_integral(&p, 1.0, xi).unwrap();
            assert!(b.integral <= b.linear_cap * (1.0 + 1e-12), "xi={xi}");
        }
        for xi in [1.0, 2.0, 4.0] {
            let r = cf_diff_bound_integral(&p, 1.0, 2.0 * xi).unwrap().integral
                / cf_diff_bound_integral(&p, 1.0, xi).unwrap().integral;
            assert!((1.5..=2.5).contains(&r), "{r}");
        }
    }

    #[test]
    fn kappa_and_delta() {
        assert_eq!(ustat_kappa2(1.0, 2).unwrap(), 4.0);
        assert_abs_diff_eq!(ustat_kappa2(1.0, 10).unwrap(), 20.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ustat_delta_bound(1.0, 4).unwrap(), (4f64 / 27.0).sqrt() + 1.0 / 3.0, epsilon = 1e-15);
        let v = ustat_delta_bound(1.0, 10).unwrap();
        assert_abs_diff_eq!(v, (70f64 / 729.0).sqrt() + 1.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.421, epsilon = 1e-3);
        let ratio = ustat_delta_bound(1.0, 10_000).unwrap() / ustat_delta_bound(1.0, 100).unwrap();
        assert!((ratio / 0.1 - 1.0).abs() < 0.2);
        assert!(ustat_delta_bound(1.0, 3).is_err());
        assert_eq!(ustat_delta_bound(-2.0, 50).unwrap(), ustat_delta_bound(2.0, 50).unwrap());
    }

    #[test]
    fn ncgamma_cases() {
        for nu in [0.3, 1.0, 2.5] {
            let mo = MomentEstimates { m2: 2.0 * nu * nu, m3: 8.0 * nu.powi(3), m4: 60.0 * nu.powi(4) };
            assert!(ncgamma_moment_bound(nu, &mo).unwrap().abs() < 1e-9);
        }
        let b = ncgamma_moment_bound(1.0, &MomentEstimates { m2: 2.0, m3: 0.0, m4: 12.0 }).unwrap();
        assert!(b > 0.0);
        let bad = MomentEstimates { m2: 2.0, m3: 100.0, m4: 12.0 };
        assert!(matches!(ncgamma_moment_bound(1.0, &bad), Err(Error::InconsistentMoments(_))));
    }

    #[test]
    fn ustat_small_cases() {
        assert_eq!(ustat_from_normals(1.5, &[0.0; 7]), 0.0);
        assert_abs_diff_eq!(ustat_from_normals(1.5, &[0.3, -2.0]), 2.0 * 1.5 * 0.3 * -2.0, epsilon = 1e-15);
        let cfg = UStatConfig::new(1.0, 30, 9).unwrap();
        assert_eq!(ustat_sample(&cfg, 1000, Exec::Sequential), ustat_sample(&cfg, 1000, Exec::default()));
        assert!(UStatConfig::new(0.0, 10, 1).is_err());
    }

    #[test]
    fn exact_moments_match_cf() {
        let (alpha, n) = (0.8, 12);
        let mo = ustat_exact_moments(alpha, n);
        assert_abs_diff_eq!(mo.m2, ustat_kappa2(alpha, n).unwrap(), epsilon = 1e-14);
        // second derivative of the CF at 0 by central differences
        let cf = ustat_exact_cf(alpha, n);
        let h = 1e-3;
        let d2 = (cf.eval(h) + cf.eval(-h) - 2.0 * cf.eval(0.0)) / (h * h);
        assert!((-d2.re - mo.m2).abs() < 1e-5);
    }

    #[test]
    fn accumulator_merge() {
        let xs: Vec<f64> = (0..100_000).map(|k| ((k * 7919) % 1000) as f64 / 100.0 - 5.0).collect();
        let mut a = MomentAccumulator::default();
        xs.iter().for_each(|&x| a.push(x));
        let b = sample_moments(&xs, Exec::default());
        for k in 1..=4 {
            assert!((a.raw(k) - b.raw(k)).abs() <= 1e-12 * a.raw(k).abs().max(1.0));
        }
        assert_eq!(b.count(), 100_000);
    }
}
