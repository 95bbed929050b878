//! Experiment records.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::io::fmt12;

/// One row of an experiment: the Δₙ driving the bounds, the bounds
/// themselves and, when available, a measured distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub epsilon: f64,
    pub delta_n: f64,
    pub w_order: u32,
    /// Absent when the transfer hypotheses cannot be met at this n.
    pub w_bound: Option<f64>,
    pub kol_bound: Option<f64>,
    pub kol_empirical: Option<f64>,
    pub meta: BTreeMap<String, Value>,
}

impl BoundReport {
    pub fn new(n: u64, epsilon: f64, delta_n: f64, w_order: u32) -> Self {
        BoundReport { n, epsilon, delta_n, w_order, w_bound: None, kol_bound: None, kol_empirical: None, meta: BTreeMap::new() }
    }

    pub fn note(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.meta.insert(key.to_string(), v.into());
        self
    }

    /// Bounds nonnegative and empirical ≤ bound where both exist.
    pub fn is_consistent(&self) -> bool {
        let nonneg = [self.w_bound, self.kol_bound, self.kol_empirical].iter().flatten().all(|v| *v >= 0.0);
        let dominated = match (self.kol_empirical, self.kol_bound) {
            (Some(e), Some(b)) => e <= b,
            _ => true,
        };
        nonneg && dominated
    }

    pub const CSV_HEADER: &'static str = "n,epsilon,delta_n,w_order,w_bound,kol_bound,kol_empirical";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(fmt12).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            fmt12(self.epsilon),
            fmt12(self.delta_n),
            self.w_order,
            opt(self.w_bound),
            opt(self.kol_bound),
            opt(self.kol_empirical)
        )
    }
}

pub fn write_reports_json(reports: &[BoundReport], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut s = serde_json::to_string_pretty(reports)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

pub fn write_reports_csv(reports: &[BoundReport], path: &Path) -> Result<()> {
    let mut s = String::from(BoundReport::CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, s)?;
    Ok(())
}
