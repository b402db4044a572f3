//! `expanders`: partition graphs into expanders, inspect spectra and
//! conductances, run the exact references and the acceptance battery.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expanders::acceptance::Level;
use expanders::partition::VerifyMode;

use crate::report::CliError;

#[derive(Parser, Debug)]
#[command(name = "expanders", version, about = "Spectral partitioning of graphs into expanders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where the graph comes from: an edge-list file or a generator spec.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Edge-list file (`n m [weighted]` header, then `u v [w]` lines)
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Generator spec such as `clique_chain:3,8` or `planted:3,16,0.7,0.02,seed=1`
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the report here instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Auto,
    Dense,
    Iterative,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the local search and certify the resulting clustering
    Partition {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Iteration cap; `8·k·n·|E|` when omitted
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include every trace event in the report
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest eigenpairs of the normalized Laplacian
    Spectral {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Also report the sweep cut of the second eigenvector
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Volume, boundary and conductance of one vertex set
    Conductance {
        #[command(flatten)]
        source: Source,
        /// Comma-separated vertex ids
        #[arg(long, value_name = "CSV")]
        set: String,
        #[command(flatten)]
        output: Output,
    },
    /// Order-k conductance by exhaustive search (small graphs only)
    Rho {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Certify a given partition as a clustering
    Verify {
        #[command(flatten)]
        source: Source,
        /// JSON file holding the parts: a list of id lists, or a partition report
        #[arg(long, value_name = "FILE")]
        parts: PathBuf,
        #[arg(long = "phi-in")]
        phi_in: f64,
        #[arg(long = "phi-out")]
        phi_out: f64,
        #[arg(long, default_value = "auto")]
        mode: VerifyMode,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Write a generated graph as an edge list
    Gen {
        spec: String,
        #[command(flatten)]
        output: Output,
    },
    /// Run the acceptance battery and print one line per criterion
    Suite {
        #[arg(long, default_value = "desk")]
        level: Level,
        #[command(flatten)]
        output: Output,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Partition {
            source,
            k,
            c0,
            tol,
            max_iter,
            seed,
            trace,
            output,
        } => commands::partition(&source, k, c0, tol, max_iter, seed, trace, &output),
        Command::Spectral {
            source,
            k,
            sweep,
            tol,
            method,
            seed,
            output,
        } => commands::spectral(&source, k, sweep, tol, method, seed, &output),
        Command::Conductance { source, set, output } => commands::conductance(&source, &set, &output),
        Command::Rho { source, k, output } => commands::rho(&source, k, &output),
        Command::Verify {
            source,
            parts,
            phi_in,
            phi_out,
            mode,
            tol,
            output,
        } => commands::verify(&source, &parts, phi_in, phi_out, mode, tol, &output),
        Command::Gen { spec, output } => commands::generate(&spec, &output),
        Command::Suite { level, output } => commands::suite(level, &output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
