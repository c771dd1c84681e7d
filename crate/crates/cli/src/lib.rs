//! Command-line front end for `efg-core`: game generation, solving,
//! equilibrium checks, contests and audits over JSON files.

pub mod args;
mod commands;
pub mod error;
pub mod io;

use std::ffi::OsString;

use clap::Parser;

pub use error::{status, CliError};

/// Parses `argv` and runs the command, returning the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { status::USAGE } else { status::OK };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_status()
        }
    }
}
