//! `cubelab`: command-line driver for the cubic-lab experiments.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::{CliError, EXIT_FAILURE, EXIT_USAGE};

fn run(argv: Vec<OsString>) -> Result<u8, CliError> {
    let argv = config::merge_config(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return Ok(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(threads) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global()
            .map_err(|e| CliError::failure(format!("thread pool: {e}")))?;
    }
    let (report, default_format) = commands::execute(&cli.command, cli.global.seed)?;
    output::emit(&report, cli.global.format.unwrap_or(default_format), cli.global.out.as_deref())?;
    if report.failed > 0 {
        eprintln!("{}: {} of {} checks failed", report.command, report.failed, report.rows.len());
        return Ok(EXIT_FAILURE);
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
