mod cli;
mod commands;
mod grid_spec;
mod report;

use std::process::ExitCode;

use clap::Parser;

use crate::commands::{CliError, Outcome};

fn main() -> ExitCode {
    let cli = match cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli.command, &argv.join(" ")) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::NotConfirmed) => ExitCode::from(3),
        Err(e @ (CliError::Usage(_) | CliError::Io(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
