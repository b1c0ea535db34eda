//! Command-line experiment harness for `horizon-entropy`.
//!
//! Exit codes: 0 when every built-in check passes, 1 when a check fails,
//! 2 for usage or configuration errors, 3 for I/O errors.

pub mod config;
pub mod experiments;
pub mod report;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

pub use config::{Experiment, ExperimentConfig, Format, Overrides};
pub use experiments::run_experiment;
pub use report::{Check, RunReport, Table, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Experiment(#[from] horizon_entropy::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use horizon_entropy::Error as E;
        match self {
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
            Self::Experiment(
                E::InvalidArgument(_) | E::TooLarge { .. } | E::ZeroMode | E::Shape(_),
            ) => 2,
            Self::Experiment(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "horizon",
    version,
    about = "Run reproducible entanglement-entropy experiments"
)]
pub struct Args {
    /// Experiment to run.
    #[arg(long, value_enum)]
    pub experiment: Experiment,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// RNG seed (ChaCha8); overrides the file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for independent trials. Rows do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Loads the configuration named by `args`.
pub fn resolve_config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?,
        None => String::new(),
    };
    let overrides = Overrides {
        seed: args.seed,
        out: args.out.clone(),
        format: args.format,
        threads: args.threads,
    };
    ExperimentConfig::resolve(args.experiment, &text, &overrides)
}

/// Runs an experiment on a pool of `config.threads` workers.
pub fn execute(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", config.threads)))?;
    let start = Instant::now();
    let mut report = pool.install(|| run_experiment(config))?;
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Writes the rendered report to the configured destination.
pub fn write_report(config: &ExperimentConfig, report: &RunReport) -> Result<(), CliError> {
    let text = report.render(config.format);
    match &config.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

/// Full command-line flow; returns the process exit code.
pub fn run_cli(args: &Args) -> i32 {
    let outcome = resolve_config(args).and_then(|config| {
        let report = execute(&config)?;
        write_report(&config, &report)?;
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            let mut err = std::io::stderr().lock();
            for check in &report.checks {
                let _ = writeln!(
                    err,
                    "check {}: {} {}",
                    check.name,
                    if check.passed { "PASS" } else { "FAIL" },
                    check.detail
                );
            }
            let _ = writeln!(err, "wall-clock: {:.3} s", report.wall_clock_seconds);
            let _ = writeln!(
                err,
                "{}: {}",
                report.experiment,
                if report.passed() { "PASS" } else { "FAIL" }
            );
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
