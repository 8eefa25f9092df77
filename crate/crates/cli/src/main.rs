mod config;
mod generate;
mod period;
mod reconstruct;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{error::ErrorKind, Parser, Subcommand};

use config::Config;

/// Exit codes.
const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_EMPTY: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Constant-mean-curvature surfaces: generation, reconstruction, periods.
#[derive(Debug, Parser)]
#[command(name = "cmcsurf", version)]
struct Cli {
    /// TOML config file with tolerances, grid sizes, out_dir and H
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config file)
    #[arg(long, global = true, env = "CMCSURF_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write OBJ, profile CSV and a JSON report for one surface
    Generate {
        #[command(subcommand)]
        surface: generate::Surface,
    },
    /// Solve the period condition for rational targets
    Period(period::PeriodArgs),
    /// Run the invariant suites
    Verify(verify::VerifyArgs),
    /// Rebuild a surface from a sampled Gauss map
    Reconstruct(reconstruct::ReconstructArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Failed,
    Empty,
}

/// Bad flags, parameters or input files.
#[derive(Debug)]
pub struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(cli: Cli) -> Result<Outcome> {
    let mut config = Config::load(cli.config.as_deref()).map_err(|e| usage(format!("{e:#}")))?;
    if let Some(dir) = cli.out_dir {
        config.out_dir = dir;
    }
    match &cli.command {
        Command::Generate { surface } => generate::run(surface, &config),
        Command::Period(a) => period::run(a, &config),
        Command::Verify(a) => verify::run(a, &config),
        Command::Reconstruct(a) => reconstruct::run(a, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_USAGE,
            });
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::from(EXIT_OK),
        Ok(Outcome::Failed) => ExitCode::from(EXIT_FAILED),
        Ok(Outcome::Empty) => ExitCode::from(EXIT_EMPTY),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
    }
}
