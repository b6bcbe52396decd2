//! `padic-entropy`: command-line front end.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact p-adic entropies, fixed-point counts and Mahler measures.
#[derive(Parser, Debug)]
#[command(name = "padic-entropy", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether f is a unit of c0 and show its normalization.
    UnitCheck(Common),
    /// Fixed-point counts over finite quotients.
    Fixcount {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        quotients: Quotients,
    },
    /// The entropy limit along a family of quotients.
    Entropy {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        quotients: Quotients,
        #[command(flatten)]
        report: Report,
        /// Average log_p f over roots of unity instead of using the
        /// regular representation (scalar input over Z^d only).
        #[arg(long)]
        snirelman: bool,
    },
    /// One-variable p-adic Mahler measure from the Newton polygon.
    Mahler(Common),
    /// The p-adic Fuglede-Kadison determinant log_p det f.
    Detlog {
        #[command(flatten)]
        common: Common,
        /// Compute over this finite quotient instead, e.g. C4 or H2.
        #[arg(long)]
        quotient: Option<String>,
    },
    /// Randomized consistency checks between independent routes.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per check.
        #[arg(long, default_value_t = 25)]
        cases: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// The prime p.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Working precision N: results are known modulo p^N.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=256))]
    prec: u32,
    /// Polynomial or matrix, e.g. "2*t^2 - t + 2" or "[[1+3*x, 3], [0, 1]]".
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    poly: Option<String>,
    /// Read the polynomial or matrix from a file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Group: Z^d Laurent polynomials or the discrete Heisenberg group.
    #[arg(long, value_enum, default_value_t = Group::Laurent)]
    group: Group,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct Quotients {
    /// A single quotient, e.g. C3, C4xC4, H2.
    #[arg(long, conflicts_with = "family")]
    quotient: Option<String>,
    /// A family: odd:1..25, coprime:1..12, all:2..6, 1,2,4,5 or C2xC3;C4xC6.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct Report {
    /// Trailing records that must agree for a converged verdict.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
    window: u32,
    /// Digits required for a converged verdict (default: the precision).
    #[arg(long)]
    target: Option<u32>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    Laurent,
    Heisenberg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

fn init_threads() {
    if let Some(n) = std::env::var("PADIC_ENTROPY_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    init_threads();
    let outcome = commands::run(cli.command);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stdout.flush();
    if let Some(msg) = &outcome.stderr {
        eprintln!("{msg}");
    }
    ExitCode::from(outcome.code)
}
