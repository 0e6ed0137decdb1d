mod args;
mod commands;
mod config;
mod parallel;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, values or configuration: exit 1.
    Usage(String),
    /// Unreadable, malformed or inconsistent data: exit 2.
    Data(String),
}

impl From<seld3d::Error> for CliError {
    fn from(e: seld3d::Error) -> Self {
        match e {
            seld3d::Error::BadConfig(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn run() -> Result<(), CliError> {
    let argv = config::expand(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let info = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if info { Ok(()) } else { Err(CliError::Usage(String::new())) };
        }
    };
    match cli.command {
        Command::Synth(a) => commands::synth(&a),
        Command::Extract(a) => commands::extract(&a),
        Command::Train(a) => commands::train(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Score(a) => commands::score(&a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
