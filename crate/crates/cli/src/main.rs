//! `cbc`: command-line front end for the boundedness toolkit.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

pub enum Failure {
    /// Bad parameters; exit code 2.
    Invalid(String),
    Io(std::io::Error),
}

impl From<cbc_core::Error> for Failure {
    fn from(e: cbc_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let result = match cli.command {
        args::Command::Nvd(a) => commands::nvd(&a),
        args::Command::Cmax(a) => commands::cmax(&a),
        args::Command::Advect1d(a) => commands::advect1d(&a),
        args::Command::Zalesak(a) => commands::zalesak(&a),
        args::Command::Oracle(a) => commands::oracle(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
