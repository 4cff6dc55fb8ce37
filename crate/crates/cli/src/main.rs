mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

/// Temperley-Lieb diagrams, Davis complexes and Tor over Z, Q and F_p.
#[derive(Parser, Debug)]
#[command(name = "tl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Number of strands.
    #[arg(short = 's', long = "strands")]
    strands: usize,

    /// Coefficient ring: Z, Q, Fp:<prime> or Zmod:<m>.
    #[arg(long, default_value = "Z")]
    ring: String,

    /// Loop parameter a, an integer (or a fraction over Q).
    #[arg(short = 'a', long = "parameter", default_value = "0", allow_hyphen_values = true)]
    parameter: String,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    output: Format,
}

#[derive(Args, Debug, Clone)]
struct BarLimits {
    /// Bar complex degree; lower degrees are exact.
    #[arg(long = "max-degree", default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    max_degree: u64,

    /// Cap on nonzero entries per bar differential.
    #[arg(long, default_value_t = tl_core::tor::DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the diagram basis with right-cup sets.
    Basis {
        #[arg(short = 's', long = "strands")]
        strands: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        output: Format,
    },
    /// Multiply words in the generators, e.g. "1 0 1".
    Mul {
        #[arg(short = 's', long = "strands")]
        strands: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        output: Format,
        /// Words of generator indices, multiplied left to right.
        words: Vec<String>,
    },
    /// The Davis complex.
    Davis {
        #[arg(value_enum)]
        action: DavisAction,
        #[command(flatten)]
        common: Common,
    },
    /// Tor_*(1, N) by the bar or Davis route.
    Tor {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        limits: BarLimits,
        #[arg(long, value_enum, default_value_t = Method::Bar)]
        method: Method,
        /// `trivial` or `cup:<comma-separated innermost set>`.
        #[arg(long, default_value = "trivial")]
        coefficients: String,
    },
    /// Check the vanishing statements; exit 0 iff every check passes.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        limits: BarLimits,
        /// a: odd vanishing, b: even shift, c: unit parameter,
        /// d: Davis contractibility, all: whichever apply.
        #[arg(long, default_value = "all")]
        theorem: String,
        /// Seed for the random associativity spot check.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum DavisAction {
    Build,
    Check,
    Homology,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Davis,
    Bar,
    Both,
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    /// Bad input or an operation outside its hypotheses (exit 2).
    Usage(String),
    /// A mathematical check failed; the report says which (exit 1).
    Check,
    /// A computation hit an inconsistency it cannot report on (exit 1).
    Math(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("TL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
