use std::path::PathBuf;

use benchrank_core::Direction;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "benchrank",
    version,
    about = "Rank algorithms across benchmarks and test the differences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the per-benchmark rank matrix.
    Rank(Options),
    /// Run ranking, normality, Friedman and post-hoc tests, and scores.
    Analyze(Options),
    /// Write the rank histogram as SVG plus a CSV of the counts.
    Hist(Options),
    /// Print PAR10 and expected runtime per algorithm.
    Scores(Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Results table (CSV, first column benchmark names).
    #[arg(long)]
    pub results: PathBuf,
    /// Runtime table with the same shape as the results.
    #[arg(long)]
    pub times: PathBuf,
    #[arg(long, value_enum, default_value_t = DirectionArg::Min)]
    pub direction: DirectionArg,
    /// Significance level.
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub no_tie_correction: bool,
    /// Runtime cutoff in the units of the times table; enables PAR10.
    #[arg(long, allow_negative_numbers = true)]
    pub cutoff: Option<f64>,
    /// Round times to this resolution before ranking.
    #[arg(long, allow_negative_numbers = true)]
    pub time_quantum: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when omitted. Required for `hist`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub direction: Direction,
    pub alpha: f64,
    pub tie_correction: bool,
    pub cutoff: Option<f64>,
    pub time_quantum: Option<f64>,
    pub output_format: Format,
}

impl AnalysisConfig {
    pub fn from_options(options: &Options, default_format: Format) -> Result<Self, CliError> {
        let alpha = options.alpha;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CliError::Usage(format!(
                "--alpha {alpha} must lie strictly between 0 and 1"
            )));
        }
        if let Some(q) = options.time_quantum {
            if !(q.is_finite() && q > 0.0) {
                return Err(CliError::Usage(format!(
                    "--time-quantum {q} must be positive and finite"
                )));
            }
        }
        if let Some(c) = options.cutoff {
            if !(c.is_finite() && c > 0.0) {
                return Err(CliError::Usage(format!("--cutoff {c} must be positive and finite")));
            }
        }
        Ok(Self {
            direction: match options.direction {
                DirectionArg::Min => Direction::Minimize,
                DirectionArg::Max => Direction::Maximize,
            },
            alpha,
            tie_correction: !options.no_tie_correction,
            cutoff: options.cutoff,
            time_quantum: options.time_quantum,
            output_format: options.format.unwrap_or(default_format),
        })
    }
}
