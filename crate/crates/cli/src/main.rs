//! `regrad` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or IO error, 2 closure failure,
//! 3 admissibility or validation failure.

#![forbid(unsafe_code)]
// `!(x >= lo)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{OutputFormat, Overrides};

pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const CLOSURE: u8 = 2;
    pub const ADMISSIBILITY: u8 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "regrad",
    version,
    about = "Induced arithmetic, regraduation maps and CHSH checks"
)]
struct Cli {
    /// Grid size for admissibility certification.
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    /// Boundary and complement tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for sampled commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, value_enum, global = true)]
    format: Option<OutputFormat>,
    /// Write primary output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Config file (defaults to $REGRAD_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArithOp {
    Add,
    Mul,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Induced operation f⁻¹(f(a) ∘ f(b)).
    Arith {
        /// Bijection: identity, artanh or cube.
        #[arg(long = "f")]
        f: String,
        #[arg(value_enum)]
        op: ArithOp,
        #[arg(allow_negative_numbers = true)]
        a: f64,
        #[arg(allow_negative_numbers = true)]
        b: f64,
        /// Map out-of-image results back through the declared inverse extension.
        #[arg(long)]
        extend: bool,
    },
    /// Certify a regraduation map (built-in name or CSV with columns p,g).
    CheckG { target: String },
    /// Curve data for the three shipped maps.
    PlotG,
    /// CHSH value for the singlet against the classical bound.
    Chsh {
        /// Settings a a' b b' in radians.
        #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["A", "A_PRIME", "B", "B_PRIME"])]
        angles: Option<Vec<f64>>,
        /// Emit an n-point E(phi) scan over [0, pi] instead of the summary.
        #[arg(long)]
        scan: Option<usize>,
    },
    /// Two joints with the same regraded marginals and different correlators.
    Underdetermine {
        g: String,
        #[arg(allow_negative_numbers = true)]
        p: f64,
    },
    /// Sample pairs and count sums leaving the image of f.
    ClosureProbe {
        #[arg(long = "f")]
        f: String,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
    },
    /// Validate a POVM from a JSON file, optionally evaluating it on a state.
    PovmCheck {
        file: PathBuf,
        /// Bloch vector of the state to measure.
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["X", "Y", "Z"])]
        state: Option<Vec<f64>>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            });
        }
    };
    let flags = Overrides {
        grid_size: cli.grid_size,
        tol: cli.tol,
        seed: cli.seed,
        output_format: cli.format,
        output_path: cli.output,
    };
    let code = config::resolve(flags, cli.config.as_deref())
        .and_then(|cfg| commands::run(cli.command, &cfg))
        .unwrap_or_else(|e| {
            eprintln!("regrad: {e:#}");
            exit::USAGE
        });
    ExitCode::from(code)
}
