//! `invbin`: mean absolute error of inverse binomial sampling from the
//! command line.
//!
//! Exit status is 0 on success, 2 on a usage error and 1 when an argument is
//! outside the domain of the computation.

mod commands;
mod grid;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use invbin_core::{Criterion, Probability, RunConfig, SuccessTarget};

use crate::grid::GridSpec;
use crate::output::{Format, Table};

#[derive(Debug, Parser)]
#[command(name = "invbin", version, about = "Mean absolute error of inverse binomial sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format; records default to key=value lines, tables to CSV.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact normalized MAE E|p̂ - p|/p, the bound alpha_N and the slack
    /// between them.
    Mae {
        /// Number of successes that stops sampling (at least 2).
        #[arg(long = "N")]
        successes: u64,
        /// Success probability, strictly inside (0, 1).
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// Normalized MAE as a function of p, optionally with the fixed-size
    /// MAE at n = N/p where that is an integer.
    Curve {
        /// Comma-separated list of success targets.
        #[arg(long = "N", value_delimiter = ',', required = true)]
        successes: Vec<u64>,
        /// Probability grid start:stop:points[:log].
        #[arg(long, default_value = "0.01:0.99:99")]
        grid: GridSpec,
        /// Add the fixed-sample-size column.
        #[arg(long)]
        fixed: bool,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// The MAE bound alpha_N and the RMSE bound (N-2)^(-1/2) over N.
    Bounds {
        /// Comma-separated list of success targets.
        #[arg(long = "N", value_delimiter = ',', required_unless_present = "grid")]
        successes: Vec<u64>,
        /// Success-target grid start:stop:points[:log], rounded to integers.
        #[arg(long)]
        grid: Option<GridSpec>,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// Smallest N whose error bound meets the target for every p.
    ///
    /// The plan guarantees the bound; the exact error at any particular p
    /// is strictly smaller.
    Plan {
        /// Target normalized error.
        #[arg(long)]
        target: f64,
        #[arg(long, default_value = "mae", value_parser = parse_criterion)]
        criterion: Criterion,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// Monte-Carlo estimate of the normalized MAE, with the closed-form
    /// value and the z-score of their difference.
    Simulate {
        #[arg(long = "N")]
        successes: u64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output is reproducible for a fixed shard count.
        #[arg(long, default_value_t = 8)]
        shards: u32,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// Power-series coefficients x_j for j = 0..=j_max.
    Coeffs {
        #[arg(long = "N")]
        successes: u64,
        #[arg(long = "j-max", default_value_t = 20)]
        j_max: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse().map_err(|e: invbin_core::Error| e.to_string())
}

#[derive(Debug)]
enum CliError {
    Domain(invbin_core::Error),
    Io(io::Error),
}

impl From<invbin_core::Error> for CliError {
    fn from(e: invbin_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

enum Shape {
    Record,
    Table,
}

fn emit(table: &Table, shape: Shape, out: &OutputArgs) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &out.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match (out.format, shape) {
        (Some(Format::Json), _) => table.write_json(&mut sink)?,
        (Some(Format::Csv), _) | (None, Shape::Table) => table.write_csv(&mut sink)?,
        (None, Shape::Record) => table.write_text(&mut sink)?,
    }
    sink.flush()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Mae { successes, p, out } => {
            let table = commands::mae(SuccessTarget::new(successes)?, Probability::new(p)?);
            emit(&table, Shape::Record, &out)?;
        }
        Command::Curve {
            successes,
            grid,
            fixed,
            out,
        } => {
            let targets = commands::success_grid(&successes, None)?;
            let table = commands::curve(&targets, &grid, fixed)?;
            emit(&table, Shape::Table, &out)?;
        }
        Command::Bounds {
            successes,
            grid,
            out,
        } => {
            let targets = commands::success_grid(&successes, grid.as_ref())?;
            emit(&commands::bounds(&targets), Shape::Table, &out)?;
        }
        Command::Plan {
            target,
            criterion,
            out,
        } => {
            let table = commands::plan_record(target, criterion)?;
            emit(&table, Shape::Record, &out)?;
        }
        Command::Simulate {
            successes,
            p,
            trials,
            seed,
            shards,
            out,
        } => {
            let cfg = RunConfig::new(
                SuccessTarget::new(successes)?,
                Probability::new(p)?,
                trials,
                seed,
                shards,
            )?;
            emit(&commands::simulate(&cfg)?, Shape::Record, &out)?;
        }
        Command::Coeffs {
            successes,
            j_max,
            out,
        } => {
            let table = commands::coeffs(SuccessTarget::new(successes)?, j_max);
            emit(&table, Shape::Table, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Io(e)) => {
            eprintln!("invbin: {e}");
            ExitCode::FAILURE
        }
        Err(CliError::Domain(e)) => {
            eprintln!("invbin: {e}");
            ExitCode::FAILURE
        }
    }
}
