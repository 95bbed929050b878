//! From CF-difference bounds to smooth-Wasserstein and Kolmogorov bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use cf_core::error::{Error, Result};
use cf_core::quad::{integrate, QuadOptions};

/// C_p for p = 0, 1, 2.
pub const WASSERSTEIN_CONSTANTS: [f64; 3] = [3.0, 12.0, 100.0];

/// C_p from the table, or the caller's value when given.
pub fn wasserstein_constant(p: u32, supplied: Option<f64>) -> Result<f64> {
    match (supplied, WASSERSTEIN_CONSTANTS.get(p as usize)) {
        (Some(c), _) if c > 0.0 => Ok(c),
        (Some(c), _) => Err(Error::domain(format!("C_p must be positive (got {c})"))),
        (None, Some(c)) => Ok(*c),
        (None, None) => Err(Error::Capability(format!("no constant C_{p} available; supply one explicitly"))),
    }
}

/// |φ_X(ξ) − φ_Y(ξ)| ≤ C′ ε |ξ|^p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfBoundHypothesis {
    pub c_prime: f64,
    pub p: u32,
    pub epsilon: f64,
    /// Overrides the C_p table (required for p > 2).
    pub c_p: Option<f64>,
}

impl CfBoundHypothesis {
    pub fn new(c_prime: f64, p: u32, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain(format!("epsilon must lie in (0, 1) (got {epsilon})")));
        }
        if !(c_prime > 0.0 && c_prime.is_finite()) {
            return Err(Error::domain(format!("C' must be positive (got {c_prime})")));
        }
        Ok(CfBoundHypothesis { c_prime, p, epsilon, c_p: None })
    }

    pub fn with_constant(mut self, c_p: f64) -> Self {
        self.c_p = Some(c_p);
        self
    }
}

/// |Δφ(ξ)| ≤ ε Σ c_k |ξ|^{p_k}: several powers sharing one ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyCfBound {
    pub epsilon: f64,
    /// (coefficient, power, optional C_p override)
    pub terms: Vec<(f64, u32, Option<f64>)>,
}

impl PolyCfBound {
    pub fn new(epsilon: f64, terms: Vec<(f64, u32)>) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain(format!("epsilon must lie in (0, 1) (got {epsilon})")));
        }
        if terms.is_empty() || terms.iter().any(|(c, _)| !(*c >= 0.0 && c.is_finite())) {
            return Err(Error::domain("need at least one term with a nonnegative coefficient"));
        }
        Ok(PolyCfBound { epsilon, terms: terms.into_iter().map(|(c, p)| (c, p, None)).collect() })
    }

    /// Order of the smooth Wasserstein distance the bound controls.
    pub fn order(&self) -> u32 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0) + 1
    }

    /// Σ c_k·scale(p_k)·C_{p_k}.
    fn weighted(&self, scale: impl Fn(u32) -> f64) -> Result<f64> {
        self.terms.iter().try_fold(0.0, |s, (c, p, cp)| Ok(s + c * scale(*p) * wasserstein_constant(*p, *cp)?))
    }
}

impl From<CfBoundHypothesis> for PolyCfBound {
    fn from(h: CfBoundHypothesis) -> Self {
        PolyCfBound { epsilon: h.epsilon, terms: vec![(h.c_prime, h.p, h.c_p)] }
    }
}

/// P[|X| > A] ≤ C e^{−λA^α}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubExponential {
    pub c: f64,
    pub lambda: f64,
    pub alpha: f64,
}

/// P[|X| > A] ≤ C A^{−γ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub c: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailHypothesis {
    SubExponential(SubExponential),
    Polynomial(Polynomial),
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be positive (got {v})")))
    }
}

impl SubExponential {
    pub fn new(c: f64, lambda: f64, alpha: f64) -> Result<Self> {
        Ok(SubExponential { c: positive("C", c)?, lambda: positive("lambda", lambda)?, alpha: positive("alpha", alpha)? })
    }
}

impl Polynomial {
    pub fn new(c: f64, gamma: f64) -> Result<Self> {
        Ok(Polynomial { c: positive("C", c)?, gamma: positive("gamma", gamma)? })
    }
}

/// Sub-exponential tails: 2ε[C + Σ c_p 2^{p−1}√10 C_p/π · √(1 + (ln(1/ε)/λ)^{1/α})].
pub fn smooth_wasserstein_bound_exp_terms(h1: &PolyCfBound, h2: &SubExponential) -> Result<f64> {
    let eps = h1.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1) (got {eps})")));
    }
    let s = h1.weighted(|p| 2f64.powi(p as i32 - 1) * 10f64.sqrt() / PI)?;
    let m = ((1.0 / eps).ln() / h2.lambda).powf(1.0 / h2.alpha);
    Ok(2.0 * eps * (h2.c + s * (1.0 + m).sqrt()))
}

pub fn smooth_wasserstein_bound_exp(h1: &CfBoundHypothesis, h2: &SubExponential) -> Result<f64> {
    smooth_wasserstein_bound_exp_terms(&(*h1).into(), h2)
}

/// Smallest ε for which the polynomial-tail bound is infeasible, i.e. the
/// gate ε < 2γC / Σ c_p 2^{p+1}√5 C_p/π (= π√5γC/(5·2^p C_p) for one term
/// with unit coefficient).
pub fn poly_validity_threshold(h1: &PolyCfBound, h2: &Polynomial) -> Result<f64> {
    let a = h1.weighted(|p| 2f64.powi(p as i32 + 1) * 5f64.sqrt() / PI)?;
    Ok(2.0 * h2.gamma * h2.c / a)
}

/// Polynomial tails, via the explicit cut-off
/// M = (A/(2γC))^{−2/(2γ+1)}, A = ε Σ c_p 2^{p+1}√5 C_p/π, giving
/// A√M + 2C M^{−γ}.
pub fn smooth_wasserstein_bound_poly_terms(h1: &PolyCfBound, h2: &Polynomial) -> Result<f64> {
    let eps = h1.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1) (got {eps})")));
    }
    let threshold = poly_validity_threshold(h1, h2)?;
    if eps >= threshold {
        return Err(Error::Infeasible { what: format!("epsilon {eps} fails the validity gate"), threshold });
    }
    let a = eps * h1.weighted(|p| 2f64.powi(p as i32 + 1) * 5f64.sqrt() / PI)?;
    let m = (a / (2.0 * h2.gamma * h2.c)).powf(-2.0 / (2.0 * h2.gamma + 1.0));
    Ok(a * m.sqrt() + 2.0 * h2.c * m.powf(-h2.gamma))
}

pub fn smooth_wasserstein_bound_poly(h1: &CfBoundHypothesis, h2: &Polynomial) -> Result<f64> {
    smooth_wasserstein_bound_poly_terms(&(*h1).into(), h2)
}

/// (1/π)∫_{−T}^{T} g + 24m/(πT), with g even and the integral taken as 2∫₀^T.
pub fn esseen_kolmogorov_bound<G>(cf_diff_over_t: G, m: f64, t_cut: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    positive("m", m)?;
    positive("T", t_cut)?;
    let r = integrate(&cf_diff_over_t, 0.0, t_cut, QuadOptions::new(1e-12).rel(1e-10))?;
    Ok(2.0 * r.value / PI + 24.0 * m / (PI * t_cut))
}

/// Golden-section search over log T ∈ [log Tmin, log Tmax].
pub fn optimize_esseen_t<G>(cf_diff_over_t: G, m: f64, t_min: f64, t_max: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> f64,
{
    if !(t_min > 0.0 && t_min < t_max) {
        return Err(Error::domain(format!("need 0 < Tmin < Tmax (got {t_min}, {t_max})")));
    }
    let f = |lt: f64| esseen_kolmogorov_bound(&cf_diff_over_t, m, lt.exp());
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (t_min.ln(), t_max.ln());
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..80 {
        if (b - a).abs() < 1e-9 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let mut best = if fc < fd { (c.exp(), fc) } else { (d.exp(), fd) };
    for t in [t_min, t_max] {
        let v = esseen_kolmogorov_bound(&cf_diff_over_t, m, t)?;
        if v <= best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}

/// Markov: P[X > A] ≤ e^{−γA} E e^{γX}; uses the largest usable γ on the
/// grid, C = mgf_bound(γ), α = 1.
pub fn estimate_subexp_tail<M>(mgf_bound: M, gamma_grid: &[f64]) -> Result<SubExponential>
where
    M: Fn(f64) -> f64,
{
    let best = gamma_grid
        .iter()
        .copied()
        .filter(|g| *g > 0.0 && g.is_finite())
        .map(|g| (g, mgf_bound(g)))
        .filter(|(_, c)| c.is_finite() && *c > 0.0)
        .fold(None, |acc: Option<(f64, f64)>, cur| match acc {
            Some(a) if a.0 >= cur.0 => Some(a),
            _ => Some(cur),
        });
    match best {
        Some((g, c)) => SubExponential::new(c, g, 1.0),
        None if gamma_grid.is_empty() => Err(Error::domain("empty gamma grid")),
        None => Err(Error::domain("mgf bound is not finite anywhere on the gamma grid")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn se(c: f64, l: f64, a: f64) -> SubExponential {
        SubExponential::new(c, l, a).unwrap()
    }

    #[test]
    fn exp_example() {
        let e = (-1f64).exp();
        let h1 = CfBoundHypothesis::new(1.0, 0, e).unwrap();
        let v = smooth_wasserstein_bound_exp(&h1, &se(1.0, 1.0, 1.0)).unwrap();
        let want = 2.0 * e * (1.0 + 10f64.sqrt() * 3.0 / (2.0 * PI) * 2f64.sqrt());
        assert_relative_eq!(v, want, max_relative = 1e-14);
        let lo = smooth_wasserstein_bound_exp(&CfBoundHypothesis::new(1.0, 0, 0.5).unwrap(), &se(1.0, 1.0, 1.0)).unwrap();
        let hi = smooth_wasserstein_bound_exp(&CfBoundHypothesis::new(1.0, 0, 0.999).unwrap(), &se(1.0, 1.0, 1.0)).unwrap();
        assert!(hi > lo);
    }

    #[test]
    fn constants_table() {
        assert_eq!(wasserstein_constant(0, None).unwrap(), 3.0);
        assert_eq!(wasserstein_constant(1, None).unwrap(), 12.0);
        assert_eq!(wasserstein_constant(2, None).unwrap(), 100.0);
        assert!(matches!(wasserstein_constant(3, None), Err(Error::Capability(_))));
        assert_eq!(wasserstein_constant(3, Some(7.0)).unwrap(), 7.0);
        let h = CfBoundHypothesis::new(1.0, 3, 0.1).unwrap();
        assert!(smooth_wasserstein_bound_exp(&h, &se(1.0, 1.0, 1.0)).is_err());
        assert!(smooth_wasserstein_bound_exp(&h.with_constant(500.0), &se(1.0, 1.0, 1.0)).is_ok());
    }

    #[test]
    fn domain_errors() {
        assert!(CfBoundHypothesis::new(1.0, 0, 1.0).is_err());
        assert!(CfBoundHypothesis::new(1.0, 0, 0.0).is_err());
        assert!(CfBoundHypothesis::new(0.0, 0, 0.5).is_err());
        assert!(Polynomial::new(1.0, 0.0).is_err());
    }

    #[test]
    fn poly_gate() {
        let tail = Polynomial::new(1.0, 1.0).unwrap();
        let h = CfBoundHypothesis::new(1.0, 0, 0.5).unwrap();
        let thr = PI * 5f64.sqrt() / 15.0;
        match smooth_wasserstein_bound_poly(&h, &tail) {
            Err(Error::Infeasible { threshold, .. }) => assert_relative_eq!(threshold, thr, max_relative = 1e-14),
            other => panic!("expected infeasible, got {other:?}"),
        }
        let just_below = CfBoundHypothesis::new(1.0, 0, thr * (1.0 - 1e-12)).unwrap();
        assert!(smooth_wasserstein_bound_poly(&just_below, &tail).is_ok());
        let at = CfBoundHypothesis::new(1.0, 0, thr).unwrap();
        assert!(smooth_wasserstein_bound_poly(&at, &tail).is_err());
    }

    #[test]
    fn poly_rate_exponent() {
        for gamma in [1.0, 10.0, 100.0] {
            let tail = Polynomial::new(1.0, gamma).unwrap();
            let b = |e: f64| smooth_wasserstein_bound_poly(&CfBoundHypothesis::new(1.0, 0, e).unwrap(), &tail).unwrap();
            let slope = (b(1e-6).ln() - b(1e-2).ln()) / (1e-6f64.ln() - 1e-2f64.ln());
            assert_relative_eq!(slope, 2.0 * gamma / (2.0 * gamma + 1.0), max_relative = 1e-9);
        }
    }

    #[test]
    fn esseen_examples() {
        let v = esseen_kolmogorov_bound(|_| 0.0, 1.0, 10.0).unwrap();
        assert_eq!(v, 24.0 / (10.0 * PI));
        let c = 0.01;
        let v = esseen_kolmogorov_bound(|_| c, 2.0, 5.0).unwrap();
        assert_relative_eq!(v, 2.0 * c * 5.0 / PI + 48.0 / (5.0 * PI), max_relative = 1e-12);
        let (t, _) = optimize_esseen_t(|_| c, 1.0, 1.0, 1e4).unwrap();
        assert_relative_eq!(t, 1200f64.sqrt(), max_relative = 1e-2);
        let (t, _) = optimize_esseen_t(|_| 0.0, 1.0, 1.0, 1e4).unwrap();
        assert_eq!(t, 1e4);
    }

    #[test]
    fn subexp_rule() {
        let s = estimate_subexp_tail(|g| (g * g / 2.0).exp(), &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(s.lambda, 2.0);
        assert_relative_eq!(s.c, 2f64.exp(), max_relative = 1e-15);
        let s = estimate_subexp_tail(|_| 1.0, &[0.3, 0.1, 0.7]).unwrap();
        assert_eq!((s.c, s.lambda, s.alpha), (1.0, 0.7, 1.0));
        assert!(estimate_subexp_tail(|_| 1.0, &[]).is_err());
    }
}
