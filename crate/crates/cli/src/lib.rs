//! Command-line front end for the `qdwalk` simulator.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qdwalk", version, about = "Quantum-dot STIRAP walk simulator")]
pub struct Cli {
    /// JSON run configuration, layered over the preset.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Named parameter set (see `qdwalk presets`).
    #[arg(long, global = true)]
    pub preset: Option<String>,

    /// Overrides `noise.spec.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true, env = "QDWALK_OUT_DIR")]
    pub out: Option<PathBuf>,

    /// Omit `generated_at` from JSON outputs.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Scan and refine the cost surface of one process.
    Optimize,
    /// Population dynamics of one process.
    Propagate,
    /// STIRAP walk compared with the ideal walk.
    Walk,
    /// Noisy walk, plus an optional magnitude sweep.
    Noise,
    /// Selective-addressing check of a level structure.
    CheckDots,
    /// Print the effective configuration as JSON.
    ShowConfig,
    /// List preset names.
    Presets,
}

/// Loads the configuration, applies flag overrides and runs the command.
pub fn run(cli: &Cli) -> Result<commands::Report, CliError> {
    if cli.command == Command::Presets {
        return Ok(commands::Report::text(config::PRESETS.join("\n")));
    }
    let mut cfg = config::load(cli.config.as_deref(), cli.preset.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.noise.spec.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output.dir = out.clone();
    }
    if cli.no_timestamp {
        cfg.output.timestamp = false;
    }
    commands::dispatch(cli.command, &cfg)
}
