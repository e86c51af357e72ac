mod cli;
mod commands;
mod error;
mod io;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::{CliError, Result};

fn init_logging() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PARC_LOG", "warn"))
        .format_timestamp(None)
        .init();
}

fn init_threads(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start the thread pool: {e}")))
}

fn run(cli: Cli) -> Result<()> {
    let threads = match &cli.command {
        Command::Compute(a) => a.system.threads,
        Command::Sample(a) => a.system.threads,
        Command::Verify(a) => a.system.threads,
        _ => 0,
    };
    init_threads(threads)?;
    match cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Sample(a) => commands::sample(a),
        Command::Verify(a) => commands::verify(a),
        Command::Fit(a) => commands::fit(a),
        Command::Error(a) => commands::error(a),
        Command::Plotdata(a) => commands::plotdata(a),
    }
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
