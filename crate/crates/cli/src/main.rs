//! `schauder` command-line front end.
//!
//! Exit codes: 0 on success, 2 when the result is valid but flagged
//! (unsatisfied search, failed check, ill-conditioned rows), 1 on input or
//! numerical errors. Errors are printed to stderr as a single line
//! `error code=<code> command=<command> message=<text>`.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "schauder",
    version,
    about = "Schauder basis diagnostics on finite systems and discrete measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norms of all natural projections and the basis constant.
    BasisConstant {
        #[arg(long)]
        system: PathBuf,
    },
    /// Pairwise angles and pair lower bounds.
    Angles {
        #[arg(long)]
        system: PathBuf,
    },
    /// Check the angle lower bound on a system file, or on a seeded random suite.
    VerifyTheorem {
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Simultaneous rational approximation with denominator at most n.
    Approx {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long)]
        n: u64,
    },
    /// First exponent with a near-unimodular moment.
    MomentSearch {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
    /// Basis constants of truncated monomial systems, d = 2, 4, …, dmax.
    Divergence {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        dmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Multiplication by z as a shift on the cyclic basis of the first d atoms.
    ShiftRep {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// The block-diagonal minimal system with n blocks and its diagnostics.
    #[command(name = "example-2-2")]
    Example22 {
        #[arg(long)]
        n: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BasisConstant { .. } => "basis-constant",
            Command::Angles { .. } => "angles",
            Command::VerifyTheorem { .. } => "verify-theorem",
            Command::Approx { .. } => "approx",
            Command::MomentSearch { .. } => "moment-search",
            Command::Divergence { .. } => "divergence",
            Command::ShiftRep { .. } => "shift-rep",
            Command::Example22 { .. } => "example-2-2",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprintln!("error code=cli.usage command=- message={}", e.kind());
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let name = cli.command.name();
    match commands::run(&cli.command) {
        Ok(outcome) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout(), "{}", outcome.output);
            ExitCode::from(if outcome.flagged { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error code={} command={} message={}", e.code, name, e.message);
            ExitCode::from(1)
        }
    }
}
