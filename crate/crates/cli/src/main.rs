//! `fskan`: solve, sweep, profile and cross-check the MHD Falkner-Skan
//! equation from the command line.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 when a solve
//! or the shooting oracle fails numerically.

mod args;
mod commands;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::{Cli, Command, FileConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or parameter values.
    Usage(String),
    /// Numerical failure: non-convergence, divergence, no bracket.
    Failed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Failed(msg) => f.write_str(msg),
        }
    }
}

impl From<fskan::Error> for CliError {
    fn from(e: fskan::Error) -> Self {
        use fskan::Error::*;
        match e {
            Domain(_) | Contract(_) | Invariant(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Failed(_) => ExitCode::from(2),
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Solve(_) => "solve",
        Command::Sweep(_) => "sweep",
        Command::Profile(_) => "profile",
        Command::Coeffs(_) => "coeffs",
        Command::Oracle(_) => "oracle",
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let format = cli.format.or(file.format);
    let outcome = match &cli.command {
        Command::Solve(a) => commands::solve(a, &file, format)?,
        Command::Sweep(a) => commands::sweep(a, &file, format)?,
        Command::Profile(a) => commands::profile(a, &file, format)?,
        Command::Coeffs(a) => commands::coeffs(a, &file, format)?,
        Command::Oracle(a) => commands::oracle(a, &file, format)?,
    };
    output::emit(&outcome.text, cli.out.as_deref().or(file.out.as_deref()))?;
    match outcome.failure {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
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
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if let CliError::Usage(_) = err {
                let mut root = Cli::command();
                root.build();
                if let Some(sub) = root.find_subcommand_mut(command_name(&cli.command)) {
                    eprintln!("\n{}", sub.render_usage());
                }
            }
            err.exit_code()
        }
    }
}
