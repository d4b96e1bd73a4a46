//! `sympath`: indices of symplectic paths, Kepler stability reports, parameter
//! sweeps and cylindrical-coordinate traces.
//!
//! Exit codes: 0 success; 1 uncertified result, method mismatch or numerical
//! failure; 2 invalid input (malformed CSV, bad flag values, ecc >= 1);
//! 3 path does not start at the identity; 4 unsupported dimension.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod family;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{index, kepler_report, sweep, trace};

#[derive(Parser)]
#[command(name = "sympath", version, about = "Maslov-type indices of symplectic paths and Kepler orbit stability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conley-Zehnder / Maslov index of a closed-form family or a sampled path.
    Index(index::Args),
    /// Monodromy, Floquet multipliers and Morse indices of iterates of a Kepler ellipse.
    KeplerReport(kepler_report::Args),
    /// Morse indices over an (ecc, k, s) grid, one CSV row per point.
    Sweep(sweep::Args),
    /// Path samples in cylindrical coordinates together with the z = 0 section of the singular set.
    Trace(trace::Args),
}

/// Failure with a documented exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<sympath::Error> for Exit {
    fn from(e: sympath::Error) -> Self {
        use sympath::Error as E;
        let code = match e {
            E::MalformedCsv(_) | E::Domain(_) | E::ParabolicOrHyperbolic { .. } | E::Collision => 2,
            E::NonIdentityStart { .. } => 3,
            E::Dimension { .. } => 4,
            _ => 1,
        };
        Exit::new(code, format!("{}: {e}", e.code()))
    }
}

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<sympath::Error>() {
            Ok(inner) => inner.into(),
            Err(e) => Exit::new(1, format!("{e:#}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Index(a) => index::run(&a),
        Command::KeplerReport(a) => kepler_report::run(&a),
        Command::Sweep(a) => sweep::run(&a),
        Command::Trace(a) => trace::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
