//! `platonic-cf`: CF tables, constraint reports and intensity curves as CSV.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit status for a constraint report with at least one failure.
const EXIT_VALIDATION_FAILED: u8 = 1;
/// Exit status for bad arguments, including ones only caught by the library.
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = output::invocation();
    let result = match &cli.command {
        Command::Cf(a) => commands::cf(a, &invocation),
        Command::Validate(a) => commands::validate(a, &invocation),
        Command::Intensity(a) => commands::intensity(a, &invocation),
        Command::Polydisperse(a) => commands::polydisperse(a, &invocation),
        Command::Compare(a) => commands::compare(a, &invocation),
    };
    match result {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::ValidationFailed) => ExitCode::from(EXIT_VALIDATION_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
