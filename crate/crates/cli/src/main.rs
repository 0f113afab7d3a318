mod args;
mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(parity_bell::Error),
    Io(String),
}

impl From<parity_bell::Error> for CliError {
    fn from(e: parity_bell::Error) -> Self {
        CliError::Library(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(parity_bell::Error::NotConverged { .. }) | CliError::Io(_) => {
                EXIT_FAILED_CHECK
            }
            _ => EXIT_USAGE,
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let argv = match config::merge_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        // usage errors exit 2, --help and --version exit 0
        Err(e) => e.exit(),
    };

    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let output = cli.command.output();
    let text = report.render(output.format);
    let written = match &output.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write stdout: {e}")),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_FAILED_CHECK);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("check failed");
        ExitCode::from(EXIT_FAILED_CHECK)
    }
}
