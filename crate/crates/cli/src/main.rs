//! `catoverlap` command-line front end.
//!
//! Every subcommand writes one table (CSV or JSON) to `--out` or stdout. When
//! `--out` is given a `<out>.manifest.json` is written next to it recording the
//! arguments, so `catoverlap replay <manifest>` regenerates the file.

mod args;
mod commands;
mod error;
mod output;
mod parse;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.to_string().is_empty() {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(argv: Vec<String>) -> Result<(), CliError> {
    let cli = match Cli::try_parse_from(std::iter::once("catoverlap".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code == 0 {
                return Ok(());
            }
            return Err(CliError::Usage(String::new()));
        }
    };
    let exec = args::execution(cli.jobs)?;
    match cli.command {
        Command::Replay(r) => {
            let argv = commands::replay_argv(&r)?;
            run(argv)
        }
        command => commands::dispatch(command, &argv, exec),
    }
}
