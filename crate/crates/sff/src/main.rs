//! Thin command-line front end over the library's `cli` module.

use clap::{Parser, Subcommand};
use sff::cli::{
    cmd_asymptotic, cmd_montecarlo, cmd_structure, cmd_verify, parse_precision, AsymptoticArgs,
    CliError, KGrid, MethodArg, MontecarloArgs, StructureArgs,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sff",
    about = "Exact finite-N spectral form factors for the Laguerre, Jacobi and Gaussian unitary ensembles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the LUE structure function S_N(k) as CSV
    Structure {
        /// Matrix size N
        #[arg(long = "N")]
        n: usize,
        /// Laguerre weight parameter a > -1
        #[arg(long)]
        a: f64,
        /// Grid spec min:max:points:{linear|log}
        #[arg(long = "k-grid")]
        k_grid: String,
        /// Route: jue | kernel | mc | all
        #[arg(long, default_value = "jue")]
        method: String,
        /// Monte Carlo sample count (mc/all routes)
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Monte Carlo RNG seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Monte Carlo worker threads
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// double | extended (kernel route beyond N = 60)
        #[arg(long, default_value = "double")]
        precision: String,
        /// Output path (default stdout)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate the limiting dip-ramp-plateau curve as CSV
    Asymptotic {
        /// Laguerre parameter growth rate a = alpha N
        #[arg(long)]
        alpha: f64,
        /// Grid spec min:max:points:{linear|log}
        #[arg(long = "k-grid")]
        k_grid: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the cross-module verification suite
    Verify {
        /// Reduced parameter grid (seconds instead of minutes)
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare Monte Carlo estimates against the exact route as CSV
    Montecarlo {
        /// Matrix size N
        #[arg(long = "N")]
        n: usize,
        /// Gaussian rows n >= N (Laguerre parameter a = n - N)
        #[arg(long = "n")]
        rows: usize,
        /// Sample count
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// RNG seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Grid spec min:max:points:{linear|log}
        #[arg(long = "k-grid")]
        k_grid: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn write_output(output: &Option<PathBuf>, buf: &[u8]) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::stdout().write_all(buf)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Structure {
            n,
            a,
            k_grid,
            method,
            samples,
            seed,
            workers,
            precision,
            output,
        } => {
            let args = StructureArgs {
                n,
                a,
                grid: KGrid::parse(&k_grid)?,
                method: MethodArg::parse(&method)?,
                samples,
                seed,
                workers,
                precision: parse_precision(&precision)?,
            };
            let mut buf = Vec::new();
            cmd_structure(&args, &mut buf)?;
            write_output(&output, &buf)?;
            Ok(0)
        }
        Command::Asymptotic {
            alpha,
            k_grid,
            output,
        } => {
            let args = AsymptoticArgs {
                alpha,
                grid: KGrid::parse(&k_grid)?,
            };
            let mut buf = Vec::new();
            cmd_asymptotic(&args, &mut buf)?;
            write_output(&output, &buf)?;
            Ok(0)
        }
        Command::Verify { quick, output } => {
            let mut buf = Vec::new();
            let all_passed = cmd_verify(quick, &mut buf)?;
            write_output(&output, &buf)?;
            Ok(if all_passed { 0 } else { 1 })
        }
        Command::Montecarlo {
            n,
            rows,
            samples,
            seed,
            workers,
            k_grid,
            output,
        } => {
            let args = MontecarloArgs {
                size: n,
                rows,
                samples,
                seed,
                workers,
                grid: KGrid::parse(&k_grid)?,
            };
            let mut buf = Vec::new();
            cmd_montecarlo(&args, &mut buf)?;
            write_output(&output, &buf)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
