//! The `kfhn` command line: `simulate`, `sweep`, `map` and `wave`.

pub mod commands;
pub mod config;
pub mod format;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{CommandKind, RunConfig, Settings};

/// Version of every JSON schema written by the CLI.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{key}`: {message}")]
    Validation { key: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kfhn",
    version,
    about = "Periodically kicked FitzHugh-Nagumo chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the chain; write timeseries, kicks and per-node regimes.
    Simulate(Common),
    /// Classify the front node over a grid of forcing periods.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: SweepFlags,
    },
    /// Singular-limit return map, its fixed point and time estimates.
    Map(Common),
    /// Inter-node delays, wave speed and a profile snapshot.
    Wave {
        #[command(flatten)]
        common: Common,
        /// Time of the profile snapshot.
        #[arg(long = "snapshot-t")]
        snapshot_t: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// `key = value` settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long = "A", allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long = "K", allow_hyphen_values = true)]
    k: Option<f64>,
    #[arg(long)]
    transient: Option<f64>,
    #[arg(long = "sample-every")]
    sample_every: Option<u64>,
    /// Also write SVG renderings of the main outputs.
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Args)]
struct SweepFlags {
    #[arg(long = "alpha-min")]
    alpha_min: Option<f64>,
    #[arg(long = "alpha-max")]
    alpha_max: Option<f64>,
    #[arg(long = "alpha-step")]
    alpha_step: Option<f64>,
    /// Refine grid brackets of the known regime switches by bisection.
    #[arg(long = "locate-boundaries")]
    locate_boundaries: bool,
}

impl Common {
    fn settings(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let flags = Settings {
            alpha: self.alpha,
            cells: self.cells,
            t_end: self.t_end,
            dt: self.dt,
            epsilon: self.epsilon,
            c: self.c,
            a: self.a,
            k: self.k,
            transient: self.transient,
            sample_every: self.sample_every,
            svg: self.svg.then_some(true),
            out: self.out.clone(),
            ..Default::default()
        };
        Ok(file.overlay(flags))
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    match cli.command {
        Command::Simulate(common) => {
            let cfg = RunConfig::resolve(&common.settings()?, CommandKind::Simulate)?;
            commands::simulate(&cfg)
        }
        Command::Sweep { common, grid } => {
            let over = Settings {
                alpha_min: grid.alpha_min,
                alpha_max: grid.alpha_max,
                alpha_step: grid.alpha_step,
                locate_boundaries: grid.locate_boundaries.then_some(true),
                ..Default::default()
            };
            let cfg = RunConfig::resolve(&common.settings()?.overlay(over), CommandKind::Sweep)?;
            commands::sweep(&cfg)
        }
        Command::Map(common) => {
            let cfg = RunConfig::resolve(&common.settings()?, CommandKind::Map)?;
            commands::map(&cfg)
        }
        Command::Wave { common, snapshot_t } => {
            let over = Settings {
                snapshot_t,
                ..Default::default()
            };
            let cfg = RunConfig::resolve(&common.settings()?.overlay(over), CommandKind::Wave)?;
            commands::wave(&cfg)
        }
    }
}

/// [`run`] with errors reported on stderr; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run(args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("kfhn: {e}");
            e.exit_code()
        }
    }
}
