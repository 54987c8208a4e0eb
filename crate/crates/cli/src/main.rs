//! `qdesing`: command-line driver for quiver Grassmannian computations.
//!
//! Exit codes: 0 success, 2 malformed input, 3 enumeration budget exceeded,
//! 4 internal invariant violation or failed check.

mod cache;
mod commands;
mod fixtures;

use clap::{Parser, Subcommand};
use qdesing::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact point counts, strata and desingularizations of quiver Grassmannians
/// for Dynkin quivers over prime fields.
#[derive(Parser, Debug)]
#[command(name = "qdesing", version)]
pub struct Cli {
    /// Comma-separated distinct primes.
    #[arg(long, global = true, default_value = "2,3")]
    pub primes: String,
    /// Node budget of every Grassmannian enumeration.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads (1 runs sequentially).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed of the lift perturbation used for Q̂ arrow maps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory the report files are written to.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory of the on-disk report cache.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Indecomposables, AR translate, irreducible maps and the hom table.
    IndecTable { instance: PathBuf },
    /// The quiver Q̂ of B_Q as DOT (`--json` for structured data).
    Qhat {
        instance: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Dimension vector and homological checks of M̂.
    Mhat { instance: PathBuf },
    /// Point counts of Gr_e(M) (Q dimension vector) or Gr_e(M̂) (Q̂ dimension vector).
    Count {
        instance: PathBuf,
        /// Positional (canonical order) or labeled (`1=1,2=2`, `[1]=1,[S1]=1`).
        #[arg(long)]
        e: Option<String>,
        /// Fit a verified counting polynomial over the sample primes instead.
        #[arg(long)]
        fit: bool,
    },
    /// Strata of Gr_e(M) keyed by (sub type, quotient type).
    Stratify {
        instance: PathBuf,
        #[arg(long)]
        e: Option<String>,
    },
    /// Generic types, the maps π_[N], fibres and the verdicts.
    Desing {
        instance: PathBuf,
        #[arg(long)]
        e: Option<String>,
        /// Maximal number of sample primes per polynomial fit.
        #[arg(long, default_value_t = 7)]
        fit_primes: usize,
    },
    /// Closed-form A2 checks.
    A2 {
        #[command(subcommand)]
        action: A2Action,
    },
    /// Runs every fixture check.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum A2Action {
    /// Pipeline against closed forms over all instances with d1, d2 ≤ bound.
    Sweep {
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    /// A check of the artifact failed; the report is still written.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Lib(e) if e.is_user_error() => 2,
        Failure::Lib(Error::BudgetExceeded { .. }) => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Check(m) => eprintln!("check failed: {m}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
