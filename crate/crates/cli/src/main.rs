//! `thermo`: run friction, propagation, Fisher-information and estimation
//! calculations from the command line and write reproducible CSV/JSON files.

mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Command;
use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "thermo", version, about = "Impurity thermometry calculations with reproducible outputs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Friction force from quasiparticle scattering over a temperature grid.
    Friction(Common),
    /// Momentum density after one bath (gaussian, spectral or fdm).
    Propagate(Common),
    /// Exact stochastic samples of the final momentum.
    Sample(Common),
    /// Fisher information about the bath temperature.
    Fisher(Common),
    /// Monte Carlo estimation experiment against the Cramer-Rao bound.
    Estimate(Common),
    /// Fisher matrix for two baths visited in sequence.
    TwoBath(Common),
    /// Ratio of the Fisher information to its value at one relaxation time.
    Figure1(Common),
    /// Fisher information over a parameter grid.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config file, or an earlier output whose embedded config is reused.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; defaults to <command>.<ext> in $THERMO_OUTPUT_DIR, else stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Override a config key, e.g. --set temperature=0.05 --set medium.coupling=0.2
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

impl Sub {
    fn split(self) -> (Command, Common) {
        match self {
            Sub::Friction(c) => (Command::Friction, c),
            Sub::Propagate(c) => (Command::Propagate, c),
            Sub::Sample(c) => (Command::Sample, c),
            Sub::Fisher(c) => (Command::Fisher, c),
            Sub::Estimate(c) => (Command::Estimate, c),
            Sub::TwoBath(c) => (Command::TwoBath, c),
            Sub::Figure1(c) => (Command::Figure1, c),
            Sub::Sweep(c) => (Command::Sweep, c),
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let (command, common) = cli.command.split();
    let config = config::resolve(
        command.name(),
        common.config.as_deref(),
        &common.sets,
        common.seed,
        common.format,
        command.default_format(),
    )?;
    let result = command.run(&config)?;
    let bytes = output::render(command.name(), &config, &result)?;
    let format = config.format.unwrap_or(command.default_format());
    match output::destination(common.out.as_deref(), command.name(), format) {
        Some(path) => output::write_atomic(&path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thermo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
