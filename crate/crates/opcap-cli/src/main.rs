//! `opcap`: bound reports, check suites and sweeps from the command line.
//!
//! Exit status is 0 when everything ran and every check passed, 1 when a
//! check failed and 2 for configuration or input errors.

mod args;
mod checks;
mod commands;
mod config;
mod error;
mod output;
mod select;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;
use error::CliError;

fn run(cli: &Cli) -> Result<bool, CliError> {
    let run = RunConfig::resolve(&cli.common)?;
    let (text, ok) = match &cli.command {
        Command::Bounds(a) => (commands::bounds(&run, a)?, true),
        Command::Check(a) => checks::check(&run, a)?,
        Command::Sweep(a) => (commands::sweep(&run, a)?, true),
        Command::Irreps(a) => (commands::irreps(&run, a)?, true),
        Command::Optimize(a) => (commands::optimize(&run, a)?, true),
    };
    output::emit(&run, &text)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("opcap: {e}");
            ExitCode::from(2)
        }
    }
}
