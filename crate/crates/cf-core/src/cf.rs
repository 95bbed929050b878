//! Characteristic functions: target laws, weighted sums, empirical CFs.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::quad::{integrate_to_inf, QuadOptions};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A target law F∞.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    Gaussian,
    Gamma { shape: f64, rate: f64 },
    GeneralizedDickman { theta: f64 },
    /// Σ λ_k (χ²_{m_k} − m_k); `d` is the length of `lambda`.
    SecondChaos { lambda: Vec<f64>, m: Vec<u32> },
    SymmetricStable { alpha: f64 },
}

impl TargetSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            TargetSpec::Gaussian => Ok(()),
            TargetSpec::Gamma { shape, rate } => {
                if *shape > 0.0 && *rate > 0.0 && shape.is_finite() && rate.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!("gamma needs shape, rate > 0 (got {shape}, {rate})")))
                }
            }
            TargetSpec::GeneralizedDickman { theta } => {
                if *theta > 0.0 && theta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!("dickman needs theta > 0 (got {theta})")))
                }
            }
            TargetSpec::SecondChaos { lambda, m } => {
                if lambda.is_empty() || lambda.len() != m.len() {
                    return Err(Error::domain("second chaos needs d ≥ 1 and |lambda| = |m|"));
                }
                if lambda.iter().any(|l| *l == 0.0 || !l.is_finite()) {
                    return Err(Error::domain("second chaos lambda entries must be finite and nonzero"));
                }
                if m.contains(&0) {
                    return Err(Error::domain("second chaos multiplicities must be positive"));
                }
                for i in 0..lambda.len() {
                    for j in 0..i {
                        if lambda[i] == lambda[j] {
                            return Err(Error::domain("second chaos lambda entries must be pairwise distinct"));
                        }
                    }
                }
                Ok(())
            }
            TargetSpec::SymmetricStable { alpha } => {
                if *alpha > 1.0 && *alpha < 2.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("symmetric stable needs 1 < alpha < 2 (got {alpha})")))
                }
            }
        }
    }

    /// Continuous logarithm of the CF (principal branch of each factor).
    pub fn log_cf(&self, t: f64) -> Complex64 {
        match self {
            TargetSpec::Gaussian => Complex64::new(-0.5 * t * t, 0.0),
            TargetSpec::Gamma { shape, rate } => -*shape * Complex64::new(1.0, -t / rate).ln(),
            TargetSpec::GeneralizedDickman { theta } => dickman_inner_integral(*theta, t),
            TargetSpec::SecondChaos { lambda, m } => {
                let mut s = Complex64::new(0.0, 0.0);
                for (l, k) in lambda.iter().zip(m) {
                    let k = *k as f64;
                    s += Complex64::new(0.0, -t * k * l) - 0.5 * k * Complex64::new(1.0, -2.0 * t * l).ln();
                }
                s
            }
            TargetSpec::SymmetricStable { alpha } => Complex64::new(-t.abs().powf(*alpha), 0.0),
        }
    }

    /// φ∞′(t)/φ∞(t).
    pub fn log_deriv(&self, t: f64) -> Complex64 {
        match self {
            TargetSpec::Gaussian => Complex64::new(-t, 0.0),
            TargetSpec::Gamma { shape, rate } => I * *shape / Complex64::new(*rate, -t),
            TargetSpec::GeneralizedDickman { theta } => *theta * expm1_i_over_t(t),
            TargetSpec::SecondChaos { lambda, m } => {
                let mut s = Complex64::new(0.0, 0.0);
                for (l, k) in lambda.iter().zip(m) {
                    let k = *k as f64;
                    s += -I * k * l + I * k * l / Complex64::new(1.0, -2.0 * t * l);
                }
                s
            }
            TargetSpec::SymmetricStable { alpha } => {
                if t == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(-alpha * t.abs().powf(alpha - 1.0) * t.signum(), 0.0)
                }
            }
        }
    }

    pub fn cf(&self, t: f64) -> Complex64 {
        self.log_cf(t).exp()
    }

    pub fn mean(&self) -> f64 {
        match self {
            TargetSpec::Gamma { shape, rate } => shape / rate,
            TargetSpec::GeneralizedDickman { theta } => *theta,
            _ => 0.0,
        }
    }

    pub fn name(&self) -> String {
        match self {
            TargetSpec::Gaussian => "gaussian".into(),
            TargetSpec::Gamma { shape, rate } => format!("gamma_{shape}_{rate}"),
            TargetSpec::GeneralizedDickman { theta } => format!("dickman_{theta}"),
            TargetSpec::SecondChaos { lambda, .. } => format!("chaos_d{}", lambda.len()),
            TargetSpec::SymmetricStable { alpha } => format!("stable_{alpha}"),
        }
    }
}

/// (e^{it} − 1)/t without cancellation; equals i at t = 0.
pub(crate) fn expm1_i_over_t(t: f64) -> Complex64 {
    if t == 0.0 {
        return I;
    }
    let h = (0.5 * t).sin();
    Complex64::new(-2.0 * h * h, t.sin()) / t
}

/// θ∫₀¹ (e^{itx} − 1)/x dx.
pub fn dickman_inner_integral(theta: f64, t: f64) -> Complex64 {
    theta * if t.abs() <= 30.0 { dickman_series(t) } else { dickman_contour(t) }
}

/// Σ_{k≥1} (it)^k/(k·k!) summed in double-double.
pub fn dickman_series(t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut a = Dd::from_f64(1.0);
    let mut re = Dd::ZERO;
    let mut im = Dd::ZERO;
    let mut k = 0usize;
    loop {
        k += 1;
        a = a.mul_f64(t).div_f64(k as f64);
        let term = a.div_f64(k as f64);
        match k % 4 {
            1 => im = im.add(term),
            2 => re = re.add(term.neg()),
            3 => im = im.add(term.neg()),
            _ => re = re.add(term),
        }
        if k as f64 > t.abs() && term.hi.abs() < 1e-22 {
            break;
        }
    }
    Complex64::new(re.to_f64(), im.to_f64())
}

/// Same integral for |t| away from 0 via the rotated contour:
/// −γ − ln t + iπ/2 − i e^{it} ∫₀^∞ e^{−y}/(t + iy) dy   (t > 0).
pub fn dickman_contour(t: f64) -> Complex64 {
    if t < 0.0 {
        return dickman_contour(-t).conj();
    }
    let j = integrate_to_inf(
        |y: f64| (-y).exp() / Complex64::new(t, y),
        0.0,
        1.0,
        QuadOptions::new(1e-17).rel(1e-15),
    )
    .map(|r| r.value)
    // smooth, positive-real-part denominator: this cannot fail to converge
    .expect("dickman contour integral");
    Complex64::new(-EULER_GAMMA - t.ln(), std::f64::consts::FRAC_PI_2) - I * Complex64::new(0.0, t).exp() * j
}

type CfFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Where a CharFn's values come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Exact,
    Empirical { sample_size: usize, seed: Option<u64> },
    /// Law supported on `origin + step·ℤ`.
    Lattice { origin: f64, step: f64 },
}

/// An evaluatable characteristic function.
#[derive(Clone)]
pub struct CharFn {
    eval: CfFn,
    deriv: Option<CfFn>,
    provenance: Provenance,
}

impl fmt::Debug for CharFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharFn")
            .field("provenance", &self.provenance)
            .field("has_deriv", &self.deriv.is_some())
            .finish()
    }
}

impl CharFn {
    pub fn new<F>(eval: F, provenance: Provenance) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        CharFn { eval: Arc::new(eval), deriv: None, provenance }
    }

    pub fn with_deriv<F>(mut self, deriv: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        (self.eval)(t)
    }

    pub fn deriv(&self, t: f64) -> Option<Complex64> {
        self.deriv.as_ref().map(|d| d(t))
    }

    pub fn has_deriv(&self) -> bool {
        self.deriv.is_some()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// CF of N(mean, sd²).
    pub fn normal(mean: f64, sd: f64) -> CharFn {
        let v = sd * sd;
        let e = move |t: f64| Complex64::new(-0.5 * v * t * t, mean * t).exp();
        CharFn::new(e, Provenance::Exact).with_deriv(move |t| e(t) * Complex64::new(-v * t, mean))
    }

    /// CF of a weighted sum of `n` independent copies: φ(w·t)ⁿ.
    pub fn iid_sum(&self, n: u32, weight: f64) -> CharFn {
        let base = self.clone();
        let b2 = self.clone();
        let nn = n as i32;
        let out = CharFn::new(move |t| base.eval(weight * t).powi(nn), self.provenance);
        match self.deriv {
            Some(_) if n > 0 => out.with_deriv(move |t| {
                let s = weight * t;
                b2.eval(s).powi(nn - 1) * b2.deriv(s).unwrap_or_default() * (n as f64 * weight)
            }),
            Some(_) => out.with_deriv(|_| Complex64::new(0.0, 0.0)),
            None => out,
        }
    }

    /// Mean implied by φ′(0) (a Richardson difference when φ′ is absent).
    pub fn mean(&self) -> f64 {
        if let Some(d) = self.deriv(0.0) {
            return d.im;
        }
        let h = 1e-3;
        let d1 = (self.eval(h) - self.eval(-h)).im / (2.0 * h);
        let d2 = (self.eval(h / 2.0) - self.eval(-h / 2.0)).im / h;
        (4.0 * d2 - d1) / 3.0
    }

    /// Writes `(t, re, im, abs)` rows.
    pub fn write_curve_csv(&self, ts: &[f64], path: &Path) -> Result<()> {
        let rows: Vec<Vec<f64>> = ts
            .iter()
            .map(|&t| {
                let v = self.eval(t);
                vec![t, v.re, v.im, v.norm()]
            })
            .collect();
        crate::io::write_csv(path, &["t", "re", "im", "abs"], &rows)
    }
}

/// Exact CharFn of a target law, with analytic derivative φ′ = φ·(log φ)′.
pub fn target_cf(spec: &TargetSpec) -> Result<CharFn> {
    spec.validate()?;
    let a = spec.clone();
    let b = spec.clone();
    Ok(CharFn::new(move |t| a.cf(t), Provenance::Exact).with_deriv(move |t| b.cf(t) * b.log_deriv(t)))
}

/// CF of Σ w_j X_j for independent X_j: t ↦ Π φ_j(w_j t).
pub fn weighted_sum_cf(components: Vec<(f64, CharFn)>) -> CharFn {
    let provenance = components
        .iter()
        .filter_map(|(_, c)| match c.provenance {
            p @ Provenance::Empirical { .. } => Some(p),
            _ => None,
        })
        .next()
        .unwrap_or(Provenance::Exact);
    let all_deriv = components.iter().all(|(_, c)| c.has_deriv());
    let comps = Arc::new(components);
    let c1 = comps.clone();
    let out = CharFn::new(
        move |t| c1.iter().fold(Complex64::new(1.0, 0.0), |acc, (w, c)| acc * c.eval(w * t)),
        provenance,
    );
    if !all_deriv {
        return out;
    }
    out.with_deriv(move |t| {
        // product rule with prefix/suffix products, no division by φ_j
        let vals: Vec<Complex64> = comps.iter().map(|(w, c)| c.eval(w * t)).collect();
        let n = vals.len();
        let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
        for j in (0..n).rev() {
            suffix[j] = suffix[j + 1] * vals[j];
        }
        let mut prefix = Complex64::new(1.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        for (j, (w, c)) in comps.iter().enumerate() {
            s += prefix * *w * c.deriv(w * t).unwrap_or_default() * suffix[j + 1];
            prefix *= vals[j];
        }
        s
    })
}

/// Mean of e^{itX} over the sample and its standard error.
pub fn empirical_cf(sample: &[f64], t: f64) -> Result<(Complex64, f64)> {
    if sample.is_empty() {
        return Err(Error::domain("empirical_cf needs a nonempty sample"));
    }
    let n = sample.len() as f64;
    let (mut sc, mut ss, mut sc2, mut ss2) = (0.0, 0.0, 0.0, 0.0);
    for &x in sample {
        let (s, c) = (t * x).sin_cos();
        sc += c;
        ss += s;
        sc2 += c * c;
        ss2 += s * s;
    }
    let mc = sc / n;
    let ms = ss / n;
    let stderr = if sample.len() > 1 {
        let vc = ((sc2 - n * mc * mc) / (n - 1.0)).max(0.0);
        let vs = ((ss2 - n * ms * ms) / (n - 1.0)).max(0.0);
        ((vc + vs) / n).sqrt()
    } else {
        0.0
    };
    Ok((Complex64::new(mc, ms), stderr))
}

/// Empirical CharFn with the analytic empirical derivative mean(iX e^{itX}).
pub fn empirical_charfn(sample: Arc<Vec<f64>>, seed: Option<u64>) -> Result<CharFn> {
    if sample.is_empty() {
        return Err(Error::domain("empirical CF needs a nonempty sample"));
    }
    let n = sample.len();
    let s1 = sample.clone();
    let eval = move |t: f64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &x in s1.iter() {
            let (s, c) = (t * x).sin_cos();
            acc += Complex64::new(c, s);
        }
        acc / n as f64
    };
    let deriv = move |t: f64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &x in sample.iter() {
            let (s, c) = (t * x).sin_cos();
            acc += Complex64::new(-x * s, x * c);
        }
        acc / n as f64
    };
    Ok(CharFn::new(eval, Provenance::Empirical { sample_size: n, seed }).with_deriv(deriv))
}
