//! `evsc`: likelihood ratios, p-values and optional stopping for coin tosses.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::output::{Format, Precision};

#[derive(Debug, Parser)]
#[command(name = "evsc", version, about = "Likelihood ratios and p-values for coin-tossing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    shared: Shared,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "EVSC_FORMAT", default_value_t = Format::Text)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, env = "EVSC_OUT")]
    pub out: Option<PathBuf>,

    /// Digits shown in text and CSV output. JSON always carries full precision.
    #[arg(long, global = true, value_enum, env = "EVSC_PRECISION", default_value_t = Precision::Printed)]
    pub precision: Precision,

    /// Seed for Monte Carlo runs.
    #[arg(long, global = true, env = "EVSC_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for Monte Carlo runs (0 uses every core).
    #[arg(long, global = true, env = "EVSC_WORKERS", default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Everything known about one experiment: exact and approximate LR and p-values.
    Report(ExperimentArgs),
    /// Regenerate one of the three reference tables.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
    },
    /// Monte Carlo of tossing until a c-sigma deviation, against the analytic moments.
    Stopping(StoppingArgs),
    /// Likelihood ratios against p = p0 for various alternatives.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Boundary c* above which E(T^mu) is infinite.
    Threshold {
        #[arg(long, num_args = 1.., default_values_t = [0.5, 1.0, 2.0])]
        mu: Vec<f64>,
    },
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Number of tosses.
    #[arg(long)]
    pub n: u64,
    /// Number of heads.
    #[arg(long)]
    pub k: u64,
    /// Success probability under the null hypothesis.
    #[arg(long, default_value_t = 0.5)]
    pub p0: f64,
}

#[derive(Debug, Args)]
pub struct StoppingArgs {
    /// Tosses before the boundary is first checked.
    #[arg(long, default_value_t = 10_000)]
    pub m: u64,
    /// Boundary in standard deviations.
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Tosses after which a trial is abandoned.
    #[arg(long, default_value_t = 100_000_000)]
    pub max_tosses: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SidedArg {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum IntegrandArg {
    Approx,
    Exact,
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// Point alternative p = (k - x sigma_n)/n.
    LrX {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Density alternative, integrated numerically.
    LrF {
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// `uniform:A:B` or `normal:MEAN:SD`.
        #[arg(long, default_value = "uniform:0:1")]
        density: String,
        #[arg(long, value_enum, default_value_t = IntegrandArg::Approx)]
        integrand: IntegrandArg,
    },
    /// Normal alternative with mean p0 - shift, in closed form.
    LrNormal {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        shift: f64,
        #[arg(long)]
        s: f64,
    },
    /// Uniform on (p0, p0 + alpha) against uniform on (p0 - alpha, p0).
    LrAlpha {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        alpha: f64,
    },
    /// Largest point-alternative likelihood ratio for a p-value.
    MaxLr {
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = SidedArg::Two)]
        sided: SidedArg,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let shared = &cli.shared;
    let output = match cli.command {
        Command::Report(args) => commands::report(&args)?,
        Command::Table { which } => commands::table(which)?,
        Command::Stopping(args) => commands::stopping(&args, shared)?,
        Command::Family(cmd) => commands::family(&cmd)?,
        Command::Threshold { mu } => commands::threshold(&mu)?,
    };
    let text = output.render(shared.format, shared.precision);
    match &shared.out {
        Some(path) => {
            std::fs::write(path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
