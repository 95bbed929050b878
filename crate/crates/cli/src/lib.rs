//! Experiment runner behind the `cfstein` binary.
//!
//! A run is described by an [`ExperimentConfig`] (built from a flat
//! `key = value` file and/or command-line flags), dispatched to one of the
//! suites, and written to an output directory as `reports.json`,
//! `curves/*.csv` and `ratefit.json`. Identical configs produce
//! byte-identical files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cf_core::io::write_csv;
use cf_core::report::write_reports_json;
use cf_core::{fit_rate, BoundReport, Exec, RateFit, TargetSpec};
use chaos_lab::ustat_experiment;
use dawson::dawson_curve;
use dickman_lab::{dickman_rate_experiment, DickmanRunOptions, StructureKind};
use stable_lab::{stable_rates, StableRunOptions};
use thiserror::Error;
use transfer::{
    esseen_kolmogorov_bound, poly_validity_threshold, smooth_wasserstein_bound_exp, smooth_wasserstein_bound_poly,
    CfBoundHypothesis, Polynomial, SubExponential,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {msg}")]
    Usage { field: String, msg: String },

    #[error(transparent)]
    Numeric(#[from] cf_core::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn usage(field: &str, msg: impl Into<String>) -> Self {
        CliError::Usage { field: field.to_string(), msg: msg.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }

    /// Structured form written to `error.json`.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Usage { .. } => "usage",
            CliError::Numeric(e) => e.kind(),
            CliError::Io(_) => "io",
        };
        let mut v = serde_json::json!({ "kind": kind, "message": self.to_string(), "exit_code": self.exit_code() });
        if let CliError::Usage { field, .. } = self {
            v["field"] = field.clone().into();
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Dawson,
    Dickman,
    Chaos,
    Stable,
    TransferDemo,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "dawson" => Ok(Suite::Dawson),
            "dickman" => Ok(Suite::Dickman),
            "chaos" => Ok(Suite::Chaos),
            "stable" => Ok(Suite::Stable),
            "transfer-demo" => Ok(Suite::TransferDemo),
            _ => Err(CliError::usage("suite", format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Dawson => "dawson",
            Suite::Dickman => "dickman",
            Suite::Chaos => "chaos",
            Suite::Stable => "stable",
            Suite::TransferDemo => "transfer-demo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub suite: Suite,
    /// Suite-specific settings (`example`, `theta`, `alpha`, `target`, …).
    pub parameters: BTreeMap<String, String>,
    pub n_grid: Option<Vec<usize>>,
    pub t_grid: Option<Vec<f64>>,
    pub reps: Option<usize>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub exec: Exec,
}

impl ExperimentConfig {
    pub fn new(suite: Suite, out_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            suite,
            parameters: BTreeMap::new(),
            n_grid: None,
            t_grid: None,
            reps: None,
            tol: None,
            seed: 1,
            out_dir: out_dir.into(),
            exec: Exec::default(),
        }
    }

    /// Applies one `key = value` setting; unknown keys become suite parameters.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "suite" => self.suite = value.parse()?,
            "seed" => self.seed = parse_num(&key, value)?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value),
            "n_grid" => self.n_grid = Some(parse_n_grid(value)?),
            "t_grid" => self.t_grid = Some(parse_t_grid(value)?),
            "reps" => self.reps = Some(parse_num(&key, value)?),
            "tol" => self.tol = Some(parse_num(&key, value)?),
            _ => {
                self.parameters.insert(key, value.to_string());
            }
        }
        Ok(())
    }

    /// Parses a flat config file: one `key = value` per line, `#` comments.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage("config", format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(g) = &self.n_grid {
            if g.is_empty() || g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::usage("n_grid", "must be nonempty and strictly increasing"));
            }
        }
        if self.reps == Some(0) {
            return Err(CliError::usage("reps", "must be at least 1"));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::usage("tol", "must be positive"));
            }
        }
        Ok(())
    }

    fn param<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.parameters.get(key) {
            Some(v) => v.parse().map_err(|_| CliError::usage(key, format!("cannot parse {v:?}"))),
            None => Ok(default),
        }
    }

    fn param_str(&self, key: &str, default: &str) -> String {
        self.parameters.get(key).cloned().unwrap_or_else(|| default.to_string())
    }
}

fn parse_num<T: FromStr>(field: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::usage(field, format!("cannot parse {v:?}")))
}

/// `"50,100,200"`.
pub fn parse_n_grid(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| parse_num("n_grid", p.trim())).collect()
}

/// Either a list `"0.5,1,2"` or a range `"start:stop:step"` (inclusive).
pub fn parse_t_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, h] => {
            let (a, b, h): (f64, f64, f64) = (parse_num("t_grid", a)?, parse_num("t_grid", b)?, parse_num("t_grid", h)?);
            if !(h > 0.0) || b < a {
                return Err(CliError::usage("t_grid", "range needs start ≤ stop and step > 0"));
            }
            let k = ((b - a) / h + 1e-9).floor() as usize;
            Ok((0..=k).map(|j| a + h * j as f64).collect())
        }
        [_] => s.split(',').filter(|p| !p.trim().is_empty()).map(|p| parse_num("t_grid", p.trim())).collect(),
        _ => Err(CliError::usage("t_grid", "expected a,b,c or start:stop:step")),
    }
}

/// What a run produced, before it is written out.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub reports: Vec<BoundReport>,
    /// File stem → (header, rows).
    pub curves: BTreeMap<String, (Vec<&'static str>, Vec<Vec<f64>>)>,
    pub fits: BTreeMap<String, RateFit>,
}

impl RunOutput {
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        std::fs::create_dir_all(dir.join("curves"))?;
        write_reports_json(&self.reports, &dir.join("reports.json"))?;
        for (name, (header, rows)) in &self.curves {
            write_csv(&dir.join("curves").join(format!("{name}.csv")), header, rows)?;
        }
        let mut fits = serde_json::to_string_pretty(&self.fits).map_err(cf_core::Error::from)?;
        fits.push('\n');
        std::fs::write(dir.join("ratefit.json"), fits)?;
        Ok(())
    }
}

/// Runs the configured suite and writes its artifacts.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let out = compute(cfg)?;
    out.write(&cfg.out_dir)?;
    Ok(out)
}

/// Writes `error.json` into the output directory (best effort).
pub fn write_error(dir: &Path, e: &CliError) {
    if std::fs::create_dir_all(dir).is_ok() {
        let mut s = serde_json::to_string_pretty(&e.to_json()).unwrap_or_default();
        s.push('\n');
        let _ = std::fs::write(dir.join("error.json"), s);
    }
}

pub fn compute(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    match cfg.suite {
        Suite::Dawson => run_dawson(cfg),
        Suite::Dickman => run_dickman(cfg),
        Suite::Chaos => run_chaos(cfg),
        Suite::Stable => run_stable(cfg),
        Suite::TransferDemo => run_transfer_demo(cfg),
    }
}

fn parse_list<T: FromStr>(field: &str, s: &str) -> Result<Vec<T>, CliError> {
    s.split(',').map(|p| parse_num(field, p.trim())).collect()
}

fn dawson_target(cfg: &ExperimentConfig) -> Result<Option<TargetSpec>, CliError> {
    let name = cfg.param_str("target", "levy-fixture");
    let spec = match name.as_str() {
        "levy-fixture" | "levy" => return Ok(None),
        "gaussian" => TargetSpec::Gaussian,
        "gamma" => TargetSpec::Gamma { shape: cfg.param("shape", 1.0)?, rate: cfg.param("rate", 1.0)? },
        "dickman" => TargetSpec::GeneralizedDickman { theta: cfg.param("theta", 1.0)? },
        "stable" => TargetSpec::SymmetricStable { alpha: cfg.param("alpha", 1.5)? },
        "chaos" => TargetSpec::SecondChaos {
            lambda: parse_list("lambda", &cfg.param_str("lambda", "1"))?,
            m: parse_list("m", &cfg.param_str("m", "1"))?,
        },
        other => return Err(CliError::usage("target", format!("unknown target {other:?}"))),
    };
    spec.validate()?;
    Ok(Some(spec))
}

fn run_dawson(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let target = dawson_target(cfg)?;
    let grid = cfg.t_grid.clone().unwrap_or_else(|| (0..=100).map(|k| 0.05 * k as f64).collect());
    if grid.iter().any(|x| !(*x >= 0.0)) {
        return Err(CliError::usage("t_grid", "Dawson functions are tabulated for ξ ≥ 0"));
    }
    let c = dawson_curve(target.as_ref(), &grid, cfg.tol.unwrap_or(1e-10), cfg.exec)?;
    let rows = c.grid.iter().zip(&c.values).map(|(x, v)| vec![*x, *v]).collect();
    let mut out = RunOutput::default();
    out.curves.insert(format!("dawson_{}", c.label), (vec!["xi", "D"], rows));
    Ok(out)
}

fn run_dickman(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let kind = match cfg.param_str("example", "records").as_str() {
        "records" => StructureKind::Records,
        "poisson" => StructureKind::PoissonTheta { theta: cfg.param("theta", 1.0)? },
        "primes" => StructureKind::Primes,
        other => return Err(CliError::usage("example", format!("expected records|poisson|primes, got {other:?}"))),
    };
    let mut opts = DickmanRunOptions { seed: cfg.seed, exec: cfg.exec, ..Default::default() };
    if let Some(t) = &cfg.t_grid {
        opts.t_grid = t.clone();
    }
    if let Some(r) = cfg.reps {
        opts.samples = r;
    }
    opts.truncation = cfg.param("truncation", opts.truncation)?;
    let n_grid = cfg.n_grid.clone().unwrap_or_else(|| vec![50, 100, 200, 400]);
    let exp = dickman_rate_experiment(kind, &n_grid, &opts)?;
    let mut out = RunOutput { reports: exp.reports, fits: exp.fits, ..Default::default() };
    for (n, rows) in exp.curves {
        out.curves.insert(format!("cf_diff_n{n}"), (vec!["t", "abs_diff", "bound"], rows));
    }
    Ok(out)
}

fn run_chaos(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let alpha: f64 = cfg.param("alpha", 1.0)?;
    let n_grid = cfg.n_grid.clone().unwrap_or_else(|| vec![10, 100, 1000, 10_000]);
    let t_grid = cfg.t_grid.clone().unwrap_or_else(|| (0..40).map(|j| -10.0 + 20.0 * j as f64 / 39.0).collect());
    let exp = ustat_experiment(alpha, &n_grid, cfg.reps.unwrap_or(100_000), &t_grid, cfg.seed, cfg.exec)?;
    let mut out = RunOutput { reports: exp.reports, fits: exp.fits, ..Default::default() };
    for (n, rows) in exp.curves {
        out.curves.insert(format!("cf_diff_n{n}"), (vec!["t", "abs_diff_empirical", "bound", "stderr", "abs_diff_exact"], rows));
    }
    Ok(out)
}

fn run_stable(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let alpha: f64 = cfg.param("alpha", 1.5)?;
    let mut opts = StableRunOptions { exec: cfg.exec, ..Default::default() };
    if let Some(t) = cfg.tol {
        opts.tol = t;
    }
    opts.x_max = cfg.param("x_max", opts.x_max)?;
    opts.dx = cfg.param("dx", opts.dx)?;
    let n_grid = cfg.n_grid.clone().unwrap_or_else(|| vec![100, 1000, 10_000, 100_000]);
    let exp = stable_rates(alpha, &n_grid, &opts)?;
    let rows = exp
        .reports
        .iter()
        .map(|r| vec![r.n as f64, r.kol_bound.unwrap_or(f64::NAN), r.kol_empirical.unwrap_or(f64::NAN)])
        .collect();
    let mut out = RunOutput { reports: exp.reports, fits: exp.fits, ..Default::default() };
    out.curves.insert("kolmogorov".into(), (vec!["n", "kol_bound", "kol_empirical"], rows));
    Ok(out)
}

/// Transfer bounds for a synthetic CF bound |Δφ(t)| ≤ C′ε|t|^p with ε = n^{−1/2}.
fn run_transfer_demo(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let c_prime: f64 = cfg.param("c_prime", 1.0)?;
    let p: u32 = cfg.param("p", 1)?;
    let exp_tail = SubExponential::new(cfg.param("tail_c", 2.0)?, cfg.param("tail_lambda", 1.0)?, cfg.param("tail_alpha", 1.0)?)?;
    let poly_tail = Polynomial::new(cfg.param("poly_c", 1.0)?, cfg.param("poly_gamma", 1.5)?)?;
    let m: f64 = cfg.param("density_bound", 0.5)?;
    let n_grid = cfg.n_grid.clone().unwrap_or_else(|| vec![100, 1000, 10_000, 100_000, 1_000_000]);

    let mut reports = Vec::new();
    for &n in &n_grid {
        let eps = (n as f64).powf(-0.5);
        let h1 = CfBoundHypothesis::new(c_prime, p, eps)?;
        let mut r = BoundReport::new(n as u64, eps, eps, p + 1);
        r.w_bound = Some(smooth_wasserstein_bound_exp(&h1, &exp_tail)?);
        let thr = poly_validity_threshold(&h1.into(), &poly_tail)?;
        r.note("poly_gate_threshold", thr);
        match smooth_wasserstein_bound_poly(&h1, &poly_tail) {
            Ok(v) => {
                r.note("w_bound_poly", v);
            }
            Err(e) => {
                r.note("w_bound_poly_absent", e.to_string());
            }
        }
        // Esseen with |Δφ|/t ≤ C′εt^{p−1} and T = ε^{−1/(p+1)}
        let t_cut = eps.powf(-1.0 / (p as f64 + 1.0));
        r.kol_bound = Some(esseen_kolmogorov_bound(|t| c_prime * eps * t.powi(p as i32 - 1), m, t_cut)?);
        r.note("t_cut", t_cut);
        reports.push(r);
    }
    let mut fits = BTreeMap::new();
    if reports.len() >= 3 {
        for (name, get) in [("w_bound", (|r: &BoundReport| r.w_bound) as fn(&BoundReport) -> Option<f64>), ("kol_bound", |r| r.kol_bound)] {
            let pairs: Vec<(f64, f64)> = reports.iter().filter_map(|r| get(r).map(|v| (r.n as f64, v))).collect();
            fits.insert(name.to_string(), fit_rate(&pairs)?);
        }
    }
    Ok(RunOutput { reports, fits, ..Default::default() })
}
