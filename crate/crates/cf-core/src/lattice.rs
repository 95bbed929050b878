//! Exact laws on a uniform grid, built by convolution DP.

use std::path::Path;

use num_complex::Complex64;

use crate::cf::{CharFn, Provenance};
use crate::error::{Error, Result};
use crate::par::{for_chunks, Exec};

/// pmf entries below this are flushed to zero.
pub const FLUSH: f64 = 1e-300;

/// Finite pmf on `origin + k·step`, k = 0..pmf.len().
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDistribution {
    pub step: f64,
    pub origin: f64,
    pub pmf: Vec<f64>,
}

impl LatticeDistribution {
    pub fn point_mass(at: f64, step: f64) -> Self {
        LatticeDistribution { step, origin: at, pmf: vec![1.0] }
    }

    pub fn value(&self, k: usize) -> f64 {
        self.origin + self.step * k as f64
    }

    pub fn total_mass(&self) -> f64 {
        self.pmf.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(k, p)| p * self.value(k)).sum()
    }

    /// Σ p_k e^{itx_k}, by Horner in z = e^{it·step}.
    pub fn cf(&self, t: f64) -> Complex64 {
        let z = Complex64::new(0.0, t * self.step).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for p in self.pmf.iter().rev() {
            acc = acc * z + p;
        }
        acc * Complex64::new(0.0, t * self.origin).exp()
    }

    /// Σ p_k i x_k e^{itx_k}.
    pub fn cf_deriv(&self, t: f64) -> Complex64 {
        let z = Complex64::new(0.0, t * self.step).exp();
        let mut a0 = Complex64::new(0.0, 0.0);
        let mut a1 = Complex64::new(0.0, 0.0);
        for (k, p) in self.pmf.iter().enumerate().rev() {
            a0 = a0 * z + p;
            a1 = a1 * z + p * k as f64;
        }
        Complex64::new(0.0, 1.0) * Complex64::new(0.0, t * self.origin).exp() * (a0 * self.origin + a1 * self.step)
    }

    /// Exact CharFn (with derivative) tagged with its lattice.
    pub fn charfn(&self) -> CharFn {
        let a = self.clone();
        let b = self.clone();
        CharFn::new(move |t| a.cf(t), Provenance::Lattice { origin: self.origin, step: self.step })
            .with_deriv(move |t| b.cf_deriv(t))
    }

    /// Cumulative sums F(x_k) = P[X ≤ x_k].
    pub fn cdf(&self) -> Vec<f64> {
        let mut s = 0.0;
        self.pmf
            .iter()
            .map(|p| {
                s += p;
                s.min(1.0)
            })
            .collect()
    }

    /// Smallest index K with P[X > x_K] below `tail`.
    pub fn quantile_index(&self, tail: f64) -> usize {
        let mut rest = self.total_mass();
        for (k, p) in self.pmf.iter().enumerate() {
            rest -= p;
            if rest < tail {
                return k;
            }
        }
        self.pmf.len().saturating_sub(1)
    }

    /// sup |F − G| where `g[k]` is G at atom k; both one-sided limits at every
    /// atom are compared (G is continuous).
    pub fn kolmogorov_vs(&self, g: &[f64]) -> f64 {
        let f = self.cdf();
        let mut prev = 0.0;
        let mut d: f64 = 0.0;
        for (k, gk) in g.iter().enumerate().take(f.len()) {
            d = d.max((f[k] - gk).abs()).max((prev - gk).abs());
            prev = f[k];
        }
        d
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let rows: Vec<Vec<f64>> = self.pmf.iter().enumerate().map(|(k, p)| vec![self.value(k), *p]).collect();
        crate::io::write_csv(path, &["value", "probability"], &rows)
    }

    /// Flush tiny entries, trim the zero tail, renormalize.
    pub fn normalize(&mut self) -> Result<()> {
        for p in self.pmf.iter_mut() {
            if *p < FLUSH {
                *p = 0.0;
            }
        }
        while self.pmf.len() > 1 && self.pmf.last() == Some(&0.0) {
            self.pmf.pop();
        }
        let s = self.total_mass();
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::domain("lattice pmf has no mass"));
        }
        for p in self.pmf.iter_mut() {
            *p /= s;
        }
        Ok(())
    }
}

/// Convolution DP for Σ w_i Y_i with integer weights and integer-valued,
/// finitely supported Y_i.
#[derive(Debug, Clone)]
pub struct Convolver {
    pmf: Vec<f64>,
    scratch: Vec<f64>,
    exec: Exec,
}

impl Convolver {
    pub fn new(exec: Exec) -> Self {
        Convolver { pmf: vec![1.0], scratch: Vec::new(), exec }
    }

    /// Adds an independent `weight · Y` with P[Y = j] = `law[j]`.
    pub fn add(&mut self, weight: usize, law: &[f64]) {
        if law.is_empty() {
            return;
        }
        let old_len = self.pmf.len();
        let new_len = old_len + weight * (law.len() - 1);
        self.scratch.clear();
        self.scratch.resize(new_len, 0.0);
        let old = &self.pmf;
        for_chunks(self.exec, &mut self.scratch, 1 << 13, |_, start, out| {
            for (i, o) in out.iter_mut().enumerate() {
                let k = start + i;
                let mut s = 0.0;
                for (j, q) in law.iter().enumerate() {
                    let shift = j * weight;
                    if shift > k {
                        break;
                    }
                    if let Some(p) = old.get(k - shift) {
                        s += q * p;
                    }
                }
                *o = s;
            }
        });
        std::mem::swap(&mut self.pmf, &mut self.scratch);
        while self.pmf.len() > 1 && *self.pmf.last().unwrap_or(&1.0) < FLUSH {
            self.pmf.pop();
        }
    }

    pub fn finish(self, step: f64) -> Result<LatticeDistribution> {
        let mut d = LatticeDistribution { step, origin: 0.0, pmf: self.pmf };
        d.normalize()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dice() {
        let die = [0.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        let mut c = Convolver::new(Exec::Sequential);
        c.add(1, &die);
        c.add(1, &die);
        let d = c.finish(1.0).unwrap();
        assert!((d.pmf[7] - 6.0 / 36.0).abs() < 1e-15);
        assert!((d.mean() - 7.0).abs() < 1e-13);
    }

    #[test]
    fn cf_and_derivative() {
        let d = LatticeDistribution { step: 0.5, origin: -1.0, pmf: vec![0.2, 0.3, 0.5] };
        for t in [-2.0, 0.3, 4.1] {
            let direct: Complex64 = (0..3).map(|k| d.pmf[k] * Complex64::new(0.0, t * d.value(k)).exp()).sum();
            assert!((d.cf(t) - direct).norm() < 1e-15);
            let dd: Complex64 =
                (0..3).map(|k| d.pmf[k] * Complex64::new(0.0, d.value(k)) * Complex64::new(0.0, t * d.value(k)).exp()).sum();
            assert!((d.cf_deriv(t) - dd).norm() < 1e-15);
        }
    }

    #[test]
    fn kolmogorov_uses_both_limits() {
        let d = LatticeDistribution { step: 1.0, origin: 0.0, pmf: vec![0.5, 0.5] };
        // G = 0.5 at both atoms: F jumps 0 → 0.5 → 1
        assert!((d.kolmogorov_vs(&[0.5, 0.5]) - 0.5).abs() < 1e-15);
    }
}
