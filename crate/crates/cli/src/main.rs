use std::path::PathBuf;
use std::process::ExitCode;

use cf_core::Exec;
use cli::{run, write_error, CliError, ExperimentConfig, Suite};
use clap::{Args, Parser, Subcommand};

/// Characteristic-function bound experiments.
#[derive(Parser)]
#[command(name = "cfstein", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generalized Dawson function curve (xi, D) for a target.
    Dawson {
        /// levy-fixture | gaussian | gamma | dickman | stable | chaos
        #[arg(long)]
        target: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Dickman rate experiment for records, Poisson(θ) or prime sums.
    Dickman {
        /// records | poisson | primes
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        theta: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Second-chaos U-statistic experiment.
    Chaos {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Stable domain-of-attraction rates for the Pareto-type family.
    Stable {
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Transfer bounds for a synthetic CF-difference bound ε = n^{-1/2}.
    TransferDemo {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// key = value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated, strictly increasing.
    #[arg(long)]
    n_grid: Option<String>,
    /// a,b,c or start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    t_grid: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Extra suite parameter, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Run loops on one thread.
    #[arg(long)]
    sequential: bool,
}

fn build(cmd: Command) -> Result<ExperimentConfig, CliError> {
    let (suite, common, extra): (Suite, Common, Vec<(&str, Option<String>)>) = match cmd {
        Command::Dawson { target, common } => (Suite::Dawson, common, vec![("target", target)]),
        Command::Dickman { example, theta, common } => {
            (Suite::Dickman, common, vec![("example", example), ("theta", theta.map(|v| v.to_string()))])
        }
        Command::Chaos { alpha, common } => (Suite::Chaos, common, vec![("alpha", alpha.map(|v| v.to_string()))]),
        Command::Stable { alpha, common } => (Suite::Stable, common, vec![("alpha", alpha.map(|v| v.to_string()))]),
        Command::TransferDemo { common } => (Suite::TransferDemo, common, vec![]),
    };
    let mut cfg = ExperimentConfig::new(suite, "cfstein-out");
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage { field: "config".into(), msg: format!("{}: {e}", path.display()) })?;
        cfg.apply_file_text(&text)?;
        if cfg.suite != suite {
            return Err(CliError::Usage { field: "suite".into(), msg: format!("config says {}, command is {suite}", cfg.suite) });
        }
    }
    for kv in &common.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage { field: "set".into(), msg: format!("expected KEY=VALUE, got {kv:?}") })?;
        cfg.set(k, v)?;
    }
    for (k, v) in extra {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    let flags = [
        ("seed", common.seed.map(|v| v.to_string())),
        ("n_grid", common.n_grid),
        ("t_grid", common.t_grid),
        ("reps", common.reps.map(|v| v.to_string())),
        ("tol", common.tol.map(|v| v.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    if let Some(out) = common.out {
        cfg.out_dir = out;
    }
    if common.sequential {
        cfg.exec = Exec::Sequential;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cfg) {
        Ok(out) => {
            println!("{}: {} reports, {} curves → {}", cfg.suite, out.reports.len(), out.curves.len(), cfg.out_dir.display());
            for (name, f) in &out.fits {
                println!("  slope {name}: {:.4} (r² {:.4})", f.slope, f.r2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            write_error(&cfg.out_dir, &e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
