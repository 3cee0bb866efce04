mod args;
mod commands;
mod config;
mod data;
mod output;
mod report;

use clap::Parser;
use macrofield::ErrorClass;
use std::process::ExitCode;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<macrofield::Error>() {
            return match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Numeric => 3,
                ErrorClass::Fit => 4,
            };
        }
    }
    // I/O, JSON and usage problems
    2
}

/// Output cut short by a closed pipe (`| head`) is not a failure.
fn broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|c| {
        let io = c.downcast_ref::<std::io::Error>().or_else(|| match c.downcast_ref::<csv::Error>()?.kind() {
            csv::ErrorKind::Io(e) => Some(e),
            _ => None,
        });
        io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
