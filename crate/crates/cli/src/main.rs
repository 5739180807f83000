mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

/// Affine Grassmann codes: construction, exact and closed-form weights.
#[derive(Debug, Parser)]
#[command(name = "agw", version)]
pub struct Cli {
    #[command(flatten)]
    pub shape: ShapeArgs,

    /// Cap on the candidates examined by one exact search.
    #[arg(long, global = true, env = "AGW_BUDGET", value_parser = parse_budget)]
    pub budget: Option<u128>,

    /// Worker threads for exhaustive searches; 1 runs sequentially.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    /// Field order.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Rows ℓ of the generic matrix.
    #[arg(long, global = true)]
    pub l: Option<usize>,
    /// Columns ℓ' of the generic matrix.
    #[arg(long, global = true)]
    pub lp: Option<usize>,
    /// m = ℓ + ℓ', as an alternative to --lp.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Level h.
    #[arg(long, global = true)]
    pub h: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the constants of a code.
    Params,
    /// Build the generator matrix and write it as a JSON record.
    Build,
    /// Generalized Hamming weights.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Run an oracle suite and report each check.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Table CSV to compare against instead of the published values (table1).
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Dual weights d_s for a list of field orders, one column per q.
    Table {
        #[arg(long, value_delimiter = ',', default_values_t = agw_core::formulas::TABLE1_Q)]
        qs: Vec<u64>,
        #[arg(long, default_value_t = agw_core::formulas::TABLE1_ROWS)]
        rows: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeightsCmd {
    /// Exact d_r by exhaustive search, with witness subcodes.
    Exact {
        /// Inclusive range A..B (or a single index); defaults to 1..k.
        #[arg(long)]
        r: Option<String>,
        /// Code record written by `build`; replaces the shape flags.
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Every entry given by a closed formula, with its domain.
    Formula,
    /// Weights of the dual code.
    Dual {
        #[arg(long, value_enum, default_value_t = DualMode::Formula)]
        mode: DualMode,
        #[arg(long, value_enum, default_value_t = Side::Initial)]
        side: Side,
        /// Inclusive range A..B of s.
        #[arg(long)]
        s: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DualMode {
    Formula,
    Recursive,
    Transform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    /// d_s of the dual.
    Initial,
    /// d_{n−k−s} of the dual.
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    LemmaA,
    LemmaB,
    Minors,
    Witnesses,
    Duality,
    Table1,
    Bounds,
    Conjecture,
}

fn parse_budget(text: &str) -> Result<u128, String> {
    match text.parse::<u128>() {
        Ok(0) => Err("budget must be at least 1".into()),
        Ok(b) => Ok(b),
        Err(e) => Err(e.to_string()),
    }
}

/// Parses `A..B` (inclusive) or a single `A`.
pub fn parse_range(text: &str) -> Result<(u128, u128)> {
    let parse = |s: &str| -> Result<u128> {
        s.trim()
            .parse()
            .with_context(|| format!("invalid range bound {s:?} in {text:?}"))
    };
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let a = parse(text)?;
            (a, a)
        }
    };
    if a > b {
        bail!("empty range {text:?}");
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match commands::run(&cli) {
        Ok(output) => {
            if let Err(e) = commands::emit(&cli, &output.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if output.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
