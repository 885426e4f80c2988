//! `bethe-asym` — command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 a check or
//! verification did not pass (the report is written regardless).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, CommandKind, RunConfig};
use commands::Outcome;
use output::CsvRow;

/// Bad or missing input; exit code 1.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(bethe_asym::Error),
    Io(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Self::Usage(e.0)
    }
}

impl From<bethe_asym::Error> for Failure {
    fn from(e: bethe_asym::Error) -> Self {
        Self::Numeric(e)
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

fn emit<R: CsvRow + Serialize>(cfg: &RunConfig, outcome: Outcome<R>) -> Result<ExitCode, Failure> {
    let io_err = |e: io::Error| Failure::Io(e.to_string());
    let mut stderr = io::stderr().lock();
    match &cfg.output {
        Some(path) => {
            let f = File::create(path).map_err(|e| Failure::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(f);
            outcome.report.emit(cfg.format, &mut w, &mut stderr).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => {
            let mut out = io::stdout().lock();
            outcome.report.emit(cfg.format, &mut out, &mut stderr).map_err(io_err)?;
            out.flush().map_err(io_err)?;
        }
    }
    Ok(match outcome.verification_failure {
        Some(msg) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFICATION)
        }
        None => ExitCode::SUCCESS,
    })
}

fn run(cfg: &RunConfig) -> Result<ExitCode, Failure> {
    match cfg.command {
        CommandKind::Thermo => emit(cfg, commands::thermo(cfg)?),
        CommandKind::Szsz => emit(cfg, commands::szsz(cfg)?),
        CommandKind::Jj => emit(cfg, commands::jj(cfg)?),
        CommandKind::Generating => emit(cfg, commands::generating(cfg)?),
        CommandKind::GskCheck => emit(cfg, commands::gsk_check(cfg)?),
        CommandKind::Verify => emit(cfg, commands::verify(cfg)?),
    }
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}\n\nUsage: bethe-asym [OPTIONS] <COMMAND>\nFor more information, try '--help'.");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match RunConfig::resolve(cli) {
        Ok(c) => c,
        Err(UsageError(msg)) => return usage(&msg),
    };
    match run(&cfg) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => usage(&msg),
        Err(Failure::Numeric(e)) => {
            eprintln!("numeric failure in {}: {e}", cfg.command.name());
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("i/o failure: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
