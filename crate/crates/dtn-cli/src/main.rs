mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

/// Verification and export toolkit for Dirichlet-to-Neumann maps of
/// circulant layered networks.
#[derive(Parser)]
#[command(name = "dtn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the continued-fraction unit-value identity over l = 1..=k.
    Conjecture(commands::ConjectureArgs),
    /// Verify that the squared network DtN map equals the cycle Laplacian.
    Theorem41(commands::TheoremArgs),
    /// Export matrices, coefficients, or evaluation points as CSV/JSON.
    Export(commands::ExportArgs),
}

/// Exit codes: 0 success, 1 verification failure, 2 usage error,
/// 3 runtime error.
fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Conjecture(args) => commands::run_conjecture(args),
        Command::Theorem41(args) => commands::run_theorem41(args),
        Command::Export(args) => commands::run_export(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(commands::CmdError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::CmdError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
