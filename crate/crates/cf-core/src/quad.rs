//! Globally adaptive Gauss–Kronrod (7/15) quadrature over real and complex
//! integrands, plus a semi-infinite variant.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values the integrator can accumulate.
pub trait QuadValue: Copy + Send + Sync {
    fn zero() -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

impl<const N: usize> QuadValue for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.iter_mut().zip(o) {
            *a += b;
        }
        self
    }
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.iter_mut().zip(o) {
            *a -= b;
        }
        self
    }
    fn scale(mut self, s: f64) -> Self {
        for a in self.iter_mut() {
            *a *= s;
        }
        self
    }
    fn norm(self) -> f64 {
        self.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

// Kronrod abscissae (descending, last is the centre) and weights; the
// odd-indexed abscissae are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 nodes of the rule on `[a, b]` as `(x, kronrod_weight, gauss_weight)`.
pub fn gk15_rule(a: f64, b: f64) -> [(f64, f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); 15];
    out[0] = (c, WGK[7] * h, WG[3] * h);
    for j in 0..7 {
        let g = if j % 2 == 1 { WG[j / 2] * h } else { 0.0 };
        out[1 + 2 * j] = (c - h * XGK[j], WGK[j] * h, g);
        out[2 + 2 * j] = (c + h * XGK[j], WGK[j] * h, g);
    }
    out
}

fn gk15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc.scale(WGK[7]);
    let mut rg = fc.scale(WG[3]);
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx).add(f(c + dx));
        rk = rk.add(s.scale(WGK[j]));
        if j % 2 == 1 {
            rg = rg.add(s.scale(WG[j / 2]));
        }
    }
    let rk = rk.scale(h);
    let err = rk.sub(rg.scale(h)).norm();
    (rk, err)
}

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Initial panel width; oscillatory integrands should pass roughly one
    /// period of the dominant phase here.
    pub panel: Option<f64>,
}

impl QuadOptions {
    pub fn new(abs_tol: f64) -> Self {
        QuadOptions { abs_tol, rel_tol: 0.0, max_intervals: 4000, panel: None }
    }

    pub fn rel(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn panel(mut self, width: f64) -> Self {
        self.panel = Some(width);
        self
    }

    pub fn max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions::new(1e-10)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
}

struct Seg<T> {
    a: f64,
    b: f64,
    val: T,
    err: f64,
}

impl<T> PartialEq for Seg<T> {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl<T> Eq for Seg<T> {}
impl<T> PartialOrd for Seg<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for Seg<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.partial_cmp(&o.err).unwrap_or(Ordering::Equal)
    }
}

/// Oriented integral of `f` over `[a, b]` (`b < a` flips the sign).
pub fn integrate<T, F>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Integral<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if a == b {
        return Ok(Integral { value: T::zero(), error: 0.0, evals: 0 });
    }
    if b < a {
        let r = integrate(f, b, a, opts)?;
        return Ok(Integral { value: r.value.scale(-1.0), ..r });
    }
    let mut pts = vec![a];
    if let Some(w) = opts.panel {
        let n = ((b - a) / w).ceil().clamp(1.0, (opts.max_intervals / 2).max(1) as f64) as usize;
        for k in 1..n {
            pts.push(a + (b - a) * k as f64 / n as f64);
        }
    }
    pts.push(b);
    integrate_points(f, &pts, opts)
}

/// Integral over `[pts[0], pts[last]]` with the given interior breakpoints.
pub fn integrate_points<T, F>(f: F, pts: &[f64], opts: QuadOptions) -> Result<Integral<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if pts.len() < 2 {
        return Err(Error::domain("integrate_points needs at least two points"));
    }
    let mut heap = BinaryHeap::with_capacity(pts.len() * 2);
    let mut value = T::zero();
    let mut err_sum = 0.0;
    let mut evals = 0usize;
    for w in pts.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        evals += 15;
        value = value.add(v);
        err_sum += e;
        heap.push(Seg { a: w[0], b: w[1], val: v, err: e });
    }
    let mut frozen: Vec<Seg<T>> = Vec::new();
    let mut frozen_err = 0.0;
    loop {
        if !(err_sum.is_finite() && value.norm().is_finite()) {
            return Err(Error::Quadrature { achieved: f64::INFINITY, requested: opts.abs_tol });
        }
        let tol = opts.abs_tol.max(opts.rel_tol * value.norm());
        if err_sum <= tol {
            break;
        }
        if heap.len() + frozen.len() >= opts.max_intervals {
            return Err(Error::Quadrature { achieved: err_sum, requested: tol });
        }
        let Some(seg) = heap.pop() else {
            // everything left is at roundoff resolution
            if frozen_err <= 10.0 * tol {
                break;
            }
            return Err(Error::Quadrature { achieved: err_sum, requested: tol });
        };
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b || (seg.b - seg.a) < 1e-14 * (seg.a.abs() + seg.b.abs()) {
            frozen_err += seg.err;
            frozen.push(seg);
            continue;
        }
        let (v1, e1) = gk15(&f, seg.a, m);
        let (v2, e2) = gk15(&f, m, seg.b);
        evals += 30;
        value = value.add(v1).add(v2).sub(seg.val);
        err_sum += e1 + e2 - seg.err;
        heap.push(Seg { a: seg.a, b: m, val: v1, err: e1 });
        heap.push(Seg { a: m, b: seg.b, val: v2, err: e2 });
    }
    // resum to shed the drift of the incremental updates
    let mut total = T::zero();
    let mut err = 0.0;
    for s in heap.iter().chain(frozen.iter()) {
        total = total.add(s.val);
        err += s.err;
    }
    Ok(Integral { value: total, error: err, evals })
}

/// Integral of `f` over `[a, ∞)` through `x = a + scale·u/(1−u)`.
pub fn integrate_to_inf<T, F>(f: F, a: f64, scale: f64, opts: QuadOptions) -> Result<Integral<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let g = |u: f64| {
        let om = 1.0 - u;
        let x = a + scale * u / om;
        if !x.is_finite() || om <= 0.0 {
            return T::zero();
        }
        let v = f(x);
        let j = scale / (om * om);
        if v.norm() == 0.0 {
            T::zero()
        } else {
            v.scale(j)
        }
    };
    // the mapped integrand is fine in the middle but the knots near u = 1
    // collect the tail, so start with a graded split
    let pts = [0.0, 0.5, 0.75, 0.875, 0.9375, 1.0];
    integrate_points(g, &pts, QuadOptions { panel: None, ..opts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| x.powi(7) - 3.0 * x * x, -1.0, 2.0, QuadOptions::new(1e-13)).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert_abs_diff_eq!(r.value, exact, epsilon = 1e-12);
    }

    #[test]
    fn oriented() {
        let fwd = integrate(|x: f64| x.exp(), 0.0, 1.0, QuadOptions::new(1e-13)).unwrap().value;
        let bwd = integrate(|x: f64| x.exp(), 1.0, 0.0, QuadOptions::new(1e-13)).unwrap().value;
        assert_abs_diff_eq!(fwd, -bwd, epsilon = 1e-15);
        assert_abs_diff_eq!(fwd, std::f64::consts::E - 1.0, epsilon = 1e-13);
    }

    #[test]
    fn complex_oscillatory() {
        let t = 40.0;
        let r = integrate(
            |x: f64| Complex64::new(0.0, t * x).exp(),
            0.0,
            1.0,
            QuadOptions::new(1e-12).panel(0.1),
        )
        .unwrap();
        let exact = (Complex64::new(0.0, t).exp() - 1.0) / Complex64::new(0.0, t);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions::new(1e-10)).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_inf(|x: f64| (-x).exp(), 0.0, 1.0, QuadOptions::new(1e-12)).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
        let r = integrate_to_inf(|x: f64| 1.0 / (1.0 + x * x), 0.0, 1.0, QuadOptions::new(1e-12)).unwrap();
        assert_abs_diff_eq!(r.value, std::f64::consts::FRAC_PI_2, epsilon = 1e-11);
    }

    #[test]
    fn reports_failure() {
        let e = integrate(|x: f64| (1.0 / x).sin() / x, 1e-9, 1.0, QuadOptions::new(1e-14).max_intervals(20));
        assert!(matches!(e, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn rule_weights_sum() {
        let r = gk15_rule(2.0, 5.0);
        let wk: f64 = r.iter().map(|n| n.1).sum();
        let wg: f64 = r.iter().map(|n| n.2).sum();
        assert_abs_diff_eq!(wk, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(wg, 3.0, epsilon = 1e-14);
    }
}
