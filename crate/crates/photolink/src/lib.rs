//! Command-line front end for `photolink-core`: JSON scenarios in, CSV and
//! JSON tables out.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::ScenarioConfig;
use error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "photolink",
    version,
    about = "Photonic link budgets, noise, gate error, frequency plans and fits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gate error and qubit count against responsivity (CSV).
    Tradeoff(Common),
    /// Effective noise occupation against optical power (CSV).
    Noise(Common),
    /// Cascade, mixer back-out and SNR budget (CSV).
    Chain(Common),
    /// Monte Carlo gate error under photon shot noise (CSV).
    Gatesim(Common),
    /// Sideband, LO and spur plan (JSON, table on stdout).
    Freqplan(Common),
    /// Fit a measured trace (JSON report).
    Fit {
        #[command(flatten)]
        common: Common,
        /// Two- or three-column CSV; overrides `fit.data`.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Writes f, data and model columns for plotting.
        #[arg(long)]
        overlay: Option<PathBuf>,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    let common = match &cli.command {
        Command::Tradeoff(c)
        | Command::Noise(c)
        | Command::Chain(c)
        | Command::Gatesim(c)
        | Command::Freqplan(c) => c,
        Command::Fit { common, .. } => common,
    };
    let cfg = ScenarioConfig::load(&common.config)?;
    let out = common.out.as_path();
    match &cli.command {
        Command::Tradeoff(_) => commands::tradeoff::run(&cfg, out),
        Command::Noise(_) => commands::noise::run(&cfg, out),
        Command::Chain(_) => commands::chain::run(&cfg, out),
        Command::Gatesim(c) => commands::gatesim::run(&cfg, out, c.seed),
        Command::Freqplan(_) => commands::freqplan::run(&cfg, out),
        Command::Fit { data, overlay, .. } => {
            commands::fit::run(&cfg, out, data.as_deref(), overlay.as_deref())
        }
    }
}
