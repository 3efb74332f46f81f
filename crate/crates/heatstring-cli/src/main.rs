//! `heatstring`: experiment driver for the spectral string toolkit.
//!
//! ```text
//! heatstring <command> --config <path> [--out <dir>] [--seed <u64>]
//! ```
//!
//! Commands: `simulate`, `eigen-report`, `asymptotics-verify`, `duhamel`,
//! `decay-fit`, `thresholds`. Exit status: 0 = success/pass, 1 = usage or
//! configuration error, 2 = a verification check failed.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "heatstring",
    version,
    about = "Spectral simulator and verification tool for the 1-D heated string",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration file (sectioned key-value text).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV/report files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the preset RNG seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the nonlinear system and write the trajectory CSV.
    Simulate(Common),
    /// Per-mode spectrum, asymptotic errors and similarity residuals.
    EigenReport(Common),
    /// Regression slopes of the eigen-asymptotics with pass/fail bands.
    AsymptoticsVerify(Common),
    /// Picard fixed point of the Duhamel map vs direct integration.
    Duhamel(Common),
    /// Fit exponential decay rates and compare with the predicted alpha.
    DecayFit(Common),
    /// Compute N0 and the decay rates alpha1, alpha2, alpha.
    Thresholds(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Simulate(c)
            | Command::EigenReport(c)
            | Command::AsymptoticsVerify(c)
            | Command::Duhamel(c)
            | Command::DecayFit(c)
            | Command::Thresholds(c) => c,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, everything else is usage
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    let common = cli.command.common();
    let cfg = match ExperimentConfig::from_file(&common.config, common.seed) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = std::fs::create_dir_all(&common.out) {
        eprintln!(
            "cannot create output directory {}: {e}",
            common.out.display()
        );
        return ExitCode::from(1);
    }
    let result = match &cli.command {
        Command::Simulate(c) => commands::simulate(&cfg, &c.out),
        Command::EigenReport(c) => commands::eigen_report(&cfg, &c.out),
        Command::AsymptoticsVerify(c) => commands::asymptotics_verify(&cfg, &c.out),
        Command::Duhamel(c) => commands::duhamel(&cfg, &c.out),
        Command::DecayFit(c) => commands::decay_fit(&cfg, &c.out),
        Command::Thresholds(c) => commands::thresholds_cmd(&cfg, &c.out),
    };
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
