// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line front end for `wavesc-core`: file formats, run manifests and
//! parallel benchmark driving.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match args::Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let raw = args.get(2..).unwrap_or_default();
    match commands::dispatch(cli.command, raw) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
