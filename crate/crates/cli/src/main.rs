//! `epdt`: command-line harness for the EPDT laboratory.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 configuration error or bad
//! usage, 3 numerical failure.

mod commands;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

#[derive(Parser, Debug)]
#[command(name = "epdt", version, about = "Numerical laboratory for the semilinear EPDT equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, value_name = "DIR", default_value = "epdt-out")]
    out: PathBuf,

    /// Seed for randomized fixtures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Critical exponents, δ class and hypothesis check for one parameter set.
    Exponents,
    /// Residual tables for the test functions and λ(t).
    HypVerify,
    /// One radial PDE run with snapshots.
    Simulate,
    /// Blow-up times of the Zhou or Kato ODEs.
    OdeBlowup,
    /// Lifespan sweep over ε with a scaling fit.
    Sweep,
    /// Functionals and the integral identity on a finished `simulate` run.
    Functionals,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<epdt_core::Error> for CliError {
    fn from(e: epdt_core::Error) -> Self {
        if e.is_numerical() {
            CliError::numerical(e.to_string())
        } else {
            CliError::config(e.to_string())
        }
    }
}

pub struct Context {
    pub config_path: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
}

impl Context {
    pub fn load<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        load_json(&self.config_path)
    }

    /// Resolves `path` against the directory of the config file.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            return path.to_path_buf();
        }
        self.config_path
            .parent()
            .map_or_else(|| path.to_path_buf(), |dir| dir.join(path))
    }
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .clone()
        .ok_or_else(|| CliError::config("--config <PATH> is required"))?;
    let ctx = Context {
        config_path,
        out: cli.out.clone(),
        seed: cli.seed,
    };
    match cli.command {
        Command::Exponents => commands::exponents::run(&ctx),
        Command::HypVerify => commands::verify::run(&ctx),
        Command::Simulate => commands::simulate::run(&ctx),
        Command::OdeBlowup => commands::ode::run(&ctx),
        Command::Sweep => commands::sweep::run(&ctx),
        Command::Functionals => commands::functionals::run(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
