//! `rough-afford`: load affordance structures, evaluate queries and run the
//! law suite.
//!
//! Exit codes: 0 success, 1 load or sort error, 2 query syntax error,
//! 3 a law, oracle comparison or witness search failed.

mod bundle;
mod cli;
mod commands;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use rough_afford::dsl::DslError;

use crate::cli::Cli;
use crate::commands::Status;

const EXIT_LOAD: u8 = 1;
const EXIT_SYNTAX: u8 = 2;
const EXIT_FAILED: u8 = 3;

fn exit_code(e: &anyhow::Error) -> u8 {
    let syntax = e.chain().any(|c| {
        c.downcast_ref::<DslError>()
            .is_some_and(DslError::is_syntax)
    });
    if syntax {
        EXIT_SYNTAX
    } else {
        EXIT_LOAD
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut w = io::BufWriter::new(stdout.lock());
    let result = commands::run(&cli.command, cli.format, &mut w);
    let _ = w.flush();
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
