//! Gil-Pelaez inversion: CDF and density values from a characteristic function.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::digamma;

use crate::cf::{CharFn, Provenance, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::par::{map_range, map_slice, Exec};
use crate::quad::{gk15_rule, integrate, integrate_to_inf, QuadOptions};

fn gp_integrand(cf: &CharFn, x: f64, mu: f64, t: f64) -> f64 {
    if t.abs() < 1e-9 {
        return mu - x;
    }
    (Complex64::new(0.0, -t * x).exp() * cf.eval(t)).im / t
}

/// P[X ≤ x] = 1/2 − (1/π)∫₀^T Im(e^{−itx}φ(t))/t dt, clamped to [0, 1].
///
/// Lattice CFs are inverted exactly by folding onto one period (the
/// truncation is then ignored); at an atom this returns the half-mass value.
pub fn gil_pelaez_cdf(cf: &CharFn, x: f64, truncation: f64, tol: f64) -> Result<f64> {
    if !(truncation > 0.0) {
        return Err(Error::domain("truncation must be positive"));
    }
    if let Provenance::Lattice { origin, step } = cf.provenance() {
        return lattice_cdf(cf, x, origin, step, tol);
    }
    let mu = cf.mean();
    let width = PI / x.abs().max(mu.abs()).max(1.0);
    let r = integrate(
        |t| gp_integrand(cf, x, mu, t),
        0.0,
        truncation,
        QuadOptions::new(tol).panel(width).max_intervals(200_000),
    )?;
    Ok((0.5 - r.value / PI).clamp(0.0, 1.0))
}

/// Σ_{m≥1} ω^m/(t + mP); regularized with the digamma function when ω = 1.
fn fold_kernel_tail(omega: Complex64, t: f64, period: f64, tol: f64) -> Result<Complex64> {
    let a = t / period;
    if (omega - 1.0).norm() < 1e-12 {
        return Ok(Complex64::new((-EULER_GAMMA - digamma(1.0 + a)) / period, 0.0));
    }
    let r = integrate_to_inf(
        |u: f64| {
            let e = (-u).exp();
            (-(a * u)).exp() * e / (Complex64::new(1.0, 0.0) - omega * e)
        },
        0.0,
        1.0,
        QuadOptions::new(tol * 1e-2).rel(1e-13),
    )?;
    Ok(omega * r.value / period)
}

fn lattice_cdf(cf: &CharFn, x: f64, origin: f64, step: f64, tol: f64) -> Result<f64> {
    let period = 2.0 * PI / step;
    let omega = Complex64::new(0.0, period * (origin - x)).exp();
    let mu = cf.mean();
    let f = |t: f64| -> Result<f64> {
        let psi = Complex64::new(0.0, -t * x).exp() * cf.eval(t);
        let head = if t.abs() < 1e-9 { mu - x } else { psi.im / t };
        Ok(head + (psi * fold_kernel_tail(omega, t, period, tol)?).im)
    };
    // errors inside the closure are surfaced through a cell
    let failure = std::cell::Cell::new(None);
    let r = integrate(
        |t| match f(t) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e.to_string()));
                0.0
            }
        },
        0.0,
        period,
        QuadOptions::new(tol).panel(period / 64.0).max_intervals(200_000),
    )?;
    if let Some(msg) = failure.take() {
        return Err(Error::domain(format!("lattice inversion kernel failed: {msg}")));
    }
    Ok((0.5 - r.value / PI).clamp(0.0, 1.0))
}

/// φ tabulated on composite Gauss–Kronrod nodes over [0, T] so that many
/// CDF/density values can share one set of CF evaluations.
#[derive(Debug, Clone)]
pub struct InversionTable {
    t: Vec<f64>,
    wk: Vec<f64>,
    wg: Vec<f64>,
    phi: Vec<Complex64>,
    mu: f64,
    exec: Exec,
}

/// A CDF value with the Kronrod−Gauss discrepancy as error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Inverted {
    pub value: f64,
    pub error: f64,
}

impl InversionTable {
    pub fn new(cf: &CharFn, truncation: f64, panel: f64, exec: Exec) -> Result<Self> {
        if !(truncation > 0.0 && panel > 0.0) {
            return Err(Error::domain("truncation and panel must be positive"));
        }
        let panels = (truncation / panel).ceil() as usize;
        let h = truncation / panels as f64;
        let mut t = Vec::with_capacity(15 * panels);
        let mut wk = Vec::with_capacity(15 * panels);
        let mut wg = Vec::with_capacity(15 * panels);
        for p in 0..panels {
            for (x, k, g) in gk15_rule(p as f64 * h, (p + 1) as f64 * h) {
                t.push(x);
                wk.push(k);
                wg.push(g);
            }
        }
        let phi = map_slice(exec, &t, |&s| cf.eval(s));
        Ok(InversionTable { t, wk, wg, phi, mu: cf.mean(), exec })
    }

    pub fn nodes(&self) -> usize {
        self.t.len()
    }

    fn sums(&self, x: f64) -> (f64, f64) {
        let (mut k, mut g) = (0.0, 0.0);
        for j in 0..self.t.len() {
            let v = gp_term(self.t[j], x, self.mu, self.phi[j]);
            k += self.wk[j] * v;
            g += self.wg[j] * v;
        }
        (k, g)
    }

    pub fn cdf(&self, x: f64) -> Inverted {
        let (k, g) = self.sums(x);
        Inverted { value: (0.5 - k / PI).clamp(0.0, 1.0), error: (k - g).abs() / PI }
    }

    /// (1/π)∫₀^T Re(e^{−itx}φ(t)) dt.
    pub fn density(&self, x: f64) -> f64 {
        let mut s = 0.0;
        for j in 0..self.t.len() {
            s += self.wk[j] * (Complex64::new(0.0, -self.t[j] * x).exp() * self.phi[j]).re;
        }
        s / PI
    }

    /// CDF on x0 + k·dx, k < count, rotating e^{−itx} incrementally (with a
    /// fresh start every block to bound drift).
    pub fn cdf_uniform(&self, x0: f64, dx: f64, count: usize) -> Vec<f64> {
        const BLOCK: usize = 256;
        let blocks = count.div_ceil(BLOCK);
        let parts = map_range(self.exec, blocks, |b| {
            let start = b * BLOCK;
            let len = BLOCK.min(count - start);
            let xs = x0 + dx * start as f64;
            let mut rot: Vec<Complex64> = self
                .t
                .iter()
                .zip(&self.phi)
                .map(|(&t, &p)| Complex64::new(0.0, -t * xs).exp() * p * (1.0 / t))
                .collect();
            let step: Vec<Complex64> = self.t.iter().map(|&t| Complex64::new(0.0, -t * dx).exp()).collect();
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                let mut s = 0.0;
                for j in 0..rot.len() {
                    s += self.wk[j] * rot[j].im;
                    rot[j] *= step[j];
                }
                out.push((0.5 - s / PI).clamp(0.0, 1.0));
            }
            out
        });
        parts.into_iter().flatten().collect()
    }

    /// Max of the inverted density over `xs`.
    pub fn density_max(&self, xs: &[f64]) -> f64 {
        map_slice(self.exec, xs, |&x| self.density(x)).into_iter().fold(0.0, f64::max)
    }
}

#[inline]
fn gp_term(t: f64, x: f64, mu: f64, phi: Complex64) -> f64 {
    if t.abs() < 1e-9 {
        mu - x
    } else {
        (Complex64::new(0.0, -t * x).exp() * phi).im / t
    }
}

/// sup |F_emp − G| over a sorted sample, with G supplied as a function.
pub fn ecdf_kolmogorov<G: Fn(f64) -> f64>(sorted: &[f64], g: G) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let gx = g(x);
        d = d.max((i as f64 / n - gx).abs()).max((j as f64 / n - gx).abs());
        i = j;
    }
    d
}
