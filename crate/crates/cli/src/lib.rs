//! Library half of the `frozen-planet` binary: argument parsing, config
//! resolution and the four commands. Commands write their payload to a
//! caller-supplied writer so they can be driven from tests.

pub mod commands;
pub mod config;
pub mod manifest;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use config::{FileConfig, FlagOverrides, Settings};

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] frozen_planet::Error),
    #[error("{failed} of {total} certificates failed")]
    Verification { failed: usize, total: usize },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(csv::Error),
    #[error("json: {0}")]
    Json(serde_json::Error),
}

// Writer failures surface as Io so a closed pipe is recognizable.
impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                return CliError::Io(io);
            }
            unreachable!("is_io_error implies an Io kind");
        }
        CliError::Csv(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        match e.io_error_kind() {
            Some(kind) => CliError::Io(std::io::Error::new(kind, e)),
            None => CliError::Json(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => EXIT_VERIFY_FAILED,
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "frozen-planet",
    version,
    about = "Frozen-planet orbits of collinear helium"
)]
pub struct Cli {
    /// Base Gauss-Legendre node count.
    #[arg(long, global = true)]
    pub quad_nodes: Option<usize>,
    /// Relative tolerance for node doubling.
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Fast,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one charge and reconstruct its trajectory.
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        /// Fixed-point tolerance on |F - 2|.
        #[arg(long)]
        tol: Option<f64>,
        /// Trajectory intervals over one period (even, >= 16).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        touch_tol: Option<f64>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Solve and classify an evenly spaced range of charges, as CSV.
    Scan {
        #[arg(long, allow_negative_numbers = true)]
        mu_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        mu_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        touch_tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the intersection threshold constants as JSON.
    Threshold,
    /// Run the certificate suite and print a pass/fail table.
    Verify {
        #[arg(value_enum, default_value = "fast")]
        level: VerifyLevel,
    },
}

impl Cli {
    fn overrides(&self) -> FlagOverrides {
        let mut f = FlagOverrides {
            quad_nodes: self.quad_nodes,
            quad_tol: self.quad_tol,
            ..Default::default()
        };
        match &self.command {
            Command::Solve {
                tol,
                samples,
                touch_tol,
                ..
            } => {
                f.tol = *tol;
                f.samples = *samples;
                f.touch_tol = *touch_tol;
            }
            Command::Scan { tol, touch_tol, .. } => {
                f.tol = *tol;
                f.touch_tol = *touch_tol;
            }
            Command::Threshold | Command::Verify { .. } => {}
        }
        f
    }
}

/// Runs a parsed command line, reading the config file from the environment.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    run_with(cli, &FileConfig::from_env()?, stdout, stderr)
}

pub fn run_with(
    cli: &Cli,
    file: &FileConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let settings = Settings::resolve(&cli.overrides(), file)?;
    match &cli.command {
        Command::Solve {
            mu, out, format, ..
        } => commands::solve(*mu, &settings, out.as_deref(), *format, stdout, stderr),
        Command::Scan {
            mu_min,
            mu_max,
            steps,
            out,
            ..
        } => commands::scan(
            *mu_min,
            *mu_max,
            *steps,
            &settings,
            out.as_deref(),
            stdout,
            stderr,
        ),
        Command::Threshold => commands::threshold(&settings, stdout),
        Command::Verify { level } => commands::verify(*level, &settings, stdout),
    }
}
