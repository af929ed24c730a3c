//! Experiment driver: each subcommand runs one family of checks, writes its
//! artifacts under `<out>/<command>/` and contributes to `<out>/report.{json,csv}`.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

pub use commands::COMMANDS;
pub use config::ExperimentConfig;
pub use error::CliError;
pub use report::{Check, Format, RunReport};

#[derive(Debug, Parser)]
#[command(name = "qfnoise", version, about = "Quantum-field noise experiments")]
pub struct Cli {
    /// TOML config; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled momenta and random trials (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Keep only checks whose `command/name` contains this string.
    #[arg(long, global = true)]
    pub check: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Fluctuation-dissipation ratio on thermal spectra.
    Fdt,
    /// Boltzmann suppression of space-like spectra.
    Suppression,
    /// Vacuum noiselessness, tensor decompositions and projectors.
    Noiseless,
    /// Time-scaling of current and energy noise.
    Scaling,
    /// Sagnac-type eigenstate signals and moments.
    Sagnac,
    /// Homodyne readout and dark counts.
    Homodyne,
    /// Wick engine against exact traces.
    WickCheck,
    /// Three-point prefactors.
    Threepoint,
    /// Every subcommand.
    All,
}

impl Command {
    pub fn names(self) -> Vec<&'static str> {
        match self {
            Command::Fdt => vec!["fdt"],
            Command::Suppression => vec!["suppression"],
            Command::Noiseless => vec!["noiseless"],
            Command::Scaling => vec!["scaling"],
            Command::Sagnac => vec!["sagnac"],
            Command::Homodyne => vec!["homodyne"],
            Command::WickCheck => vec!["wick-check"],
            Command::Threepoint => vec!["threepoint"],
            Command::All => COMMANDS.to_vec(),
        }
    }
}

/// Runs the named subcommands in parallel; reports come back in input order.
pub fn run_suite(cfg: &ExperimentConfig, out: &Path, names: &[&str]) -> Result<Vec<RunReport>, CliError> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    let ctx = commands::Context { cfg, out };
    names.par_iter().map(|n| commands::run_command(n, &ctx)).collect()
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the CLI and returns the process exit code.
pub fn run_cli(cli: &Cli) -> i32 {
    let start = Instant::now();
    let result = resolve(cli).and_then(|cfg| {
        let reports = run_suite(&cfg, &cfg.output_dir, &cli.command.names())?;
        let reports: Vec<RunReport> = match &cli.check {
            Some(f) => reports.into_iter().map(|r| r.filtered(f)).collect(),
            None => reports,
        };
        if reports.iter().all(|r| r.checks.is_empty()) {
            return Err(CliError::Config(format!("no checks match {:?}", cli.check.as_deref().unwrap_or(""))));
        }
        let path = report::write_reports(&reports, &cfg.output_dir.join("report"), cli.format)?;
        Ok((reports, path))
    });
    match result {
        Ok((reports, path)) => {
            let total: usize = reports.iter().map(|r| r.checks.len()).sum();
            let failed: Vec<_> = reports.iter().flat_map(|r| r.failures().map(move |c| (r.command.as_str(), c))).collect();
            for (cmd, c) in &failed {
                eprintln!("FAIL {cmd}/{}: computed {} expected {} (tol {})", c.name, c.computed, c.expected, c.tolerance);
            }
            eprintln!(
                "{} of {total} checks passed; report at {}; {:.2}s",
                total - failed.len(),
                path.display(),
                start.elapsed().as_secs_f64()
            );
            i32::from(!failed.is_empty())
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main_with_args() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run_cli(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}
