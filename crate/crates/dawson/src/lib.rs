//! The factorization φ − φ∞ = D∞(L∞φ) and generalized Dawson functions.

use num_complex::Complex64;
use serde::Serialize;

use cf_core::cf::{CharFn, TargetSpec};
use cf_core::error::{Error, Result};
use cf_core::par::{map_slice, Exec};
use cf_core::quad::{integrate, QuadOptions};

/// L∞φ(t) = φ′(t) − (φ∞′/φ∞)(t)·φ(t).
pub fn l_operator(phi: &CharFn, target: &TargetSpec, t: f64) -> Result<Complex64> {
    let d = phi
        .deriv(t)
        .ok_or_else(|| Error::Capability("L-operator needs a CharFn with a derivative".into()))?;
    Ok(d - target.log_deriv(t) * phi.eval(t))
}

/// D∞f(t) = φ∞(t)∫₀^t f(ξ)/φ∞(ξ) dξ, oriented for t < 0.
///
/// The ratio φ∞(t)/φ∞(ξ) is formed from logarithms so neither factor
/// overflows.
pub fn d_operator<F>(target: &TargetSpec, f: F, t: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let lt = target.log_cf(t);
    let r = integrate(|s| f(s) * (lt - target.log_cf(s)).exp(), 0.0, t, QuadOptions::new(tol).panel(0.5))?;
    Ok(r.value)
}

/// max over the grid of |(φ − φ∞)(t) − D∞(L∞φ)(t)|.
pub fn factorization_residual(target: &TargetSpec, phi: &CharFn, grid: &[f64], tol: f64, exec: Exec) -> Result<f64> {
    if !phi.has_deriv() {
        return Err(Error::Capability("factorization needs a CharFn with a derivative".into()));
    }
    target.validate()?;
    let res = map_slice(exec, grid, |&t| -> Result<f64> {
        let lhs = phi.eval(t) - target.cf(t);
        let rhs = d_operator(target, |s| l_operator(phi, target, s).unwrap_or_default(), t, tol)?;
        Ok((lhs - rhs).norm())
    });
    res.into_iter().try_fold(0.0, |m: f64, r| r.map(|v| m.max(v)))
}

/// |φ∞(ξ)|∫₀^ξ dt/|φ∞(t)| for a law given by log|φ|.
pub fn dawson_from_log_modulus<F>(log_abs: F, xi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(xi >= 0.0) {
        return Err(Error::domain(format!("dawson function needs xi ≥ 0 (got {xi})")));
    }
    if xi == 0.0 {
        return Ok(0.0);
    }
    let top = log_abs(xi);
    let r = integrate(|t| (top - log_abs(t)).exp(), 0.0, xi, QuadOptions::new(tol).rel(1e-13))?;
    Ok(r.value.max(0.0))
}

/// Generalized Dawson function D∞(ξ) of a target law.
pub fn dawson_fn(target: &TargetSpec, xi: f64, tol: f64) -> Result<f64> {
    target.validate()?;
    dawson_from_log_modulus(|t| target.log_cf(t).re, xi, tol)
}

/// The Lévy (|φ| = e^{−|t|}) case, outside the stable family supported as a
/// target.
pub fn levy_dawson(xi: f64, tol: f64) -> Result<f64> {
    dawson_from_log_modulus(|t| -t.abs(), xi, tol)
}

/// D∞ sampled on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct DawsonCurve {
    pub label: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// `None` selects the Lévy fixture.
pub fn dawson_curve(target: Option<&TargetSpec>, grid: &[f64], tol: f64, exec: Exec) -> Result<DawsonCurve> {
    let values = map_slice(exec, grid, |&xi| match target {
        Some(t) => dawson_fn(t, xi, tol),
        None => levy_dawson(xi, tol),
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(DawsonCurve { label: target.map(|t| t.name()).unwrap_or_else(|| "levy".into()), grid: grid.to_vec(), values })
}
