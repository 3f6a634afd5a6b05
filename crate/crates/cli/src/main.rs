use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod commands;

use args::Cli;

/// Failure classes, mapped to distinct exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input. Exit code 1.
    Usage(anyhow::Error),
    /// The computation itself failed. Exit code 2.
    Compute(anyhow::Error),
}

impl From<porecap::Error> for Failure {
    fn from(e: porecap::Error) -> Self {
        Failure::Compute(e.into())
    }
}

pub fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow::anyhow!("{msg}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
