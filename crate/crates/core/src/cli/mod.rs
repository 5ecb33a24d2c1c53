//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 verification failure (or a failed run), 2 configuration error.

pub mod commands;
pub mod config;
pub mod emit;

use crate::basis::BasisError;
use crate::flow::FlowError;
use crate::geometry::GeometryError;
use crate::oracle::OracleError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    /// One message per fault.
    #[error("{}", .0.join("\n"))]
    Config(Vec<String>),
    #[error("{0}")]
    Verification(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(vec![msg.into()])
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            _ => EXIT_VERIFY,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Svg,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "hopf-flow", version, about = "Exact integer linear Hopf flow of rotationally symmetric spheres")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Run configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding output.directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output formats, overriding output.formats.
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Intervals on [0, π]: output sampling and oracle grid.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Oracle time step.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Tolerance of the command's check (see README).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the configured initial data and write states, profiles and a summary.
    Evolve,
    /// Report the long-time fate of the configured flow.
    Classify,
    /// Print the modal coefficients of the configured initial data.
    Decompose,
    /// Evolve a soliton configuration and report its orbit.
    Soliton,
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Write SVG for CSV files, or SVG only for the configured run.
    Render {
        /// CSV files written by `evolve`.
        files: Vec<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifySuite {
    /// Both binomial identities for all 0 ≤ l, m ≤ max.
    Lemmas {
        #[arg(long, default_value_t = 30)]
        max: usize,
    },
    /// Closed form against the finite-difference oracle at T = 1.
    Oracle {
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value = "two-mode")]
        example: String,
    },
    /// Exact s → r → (ψ, s) roundtrip of every basis mode.
    Roundtrip,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    match commands::dispatch(&cli, &mut stdout, &mut stderr) {
        Ok(code) => code,
        Err(e) => {
            use std::io::Write;
            for line in e.to_string().lines() {
                let _ = writeln!(stderr, "error: {line}");
            }
            e.exit_code()
        }
    }
}
