#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod check;
mod commands;

use std::io;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Everything that ends a run early, mapped onto the exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Suite(String),
    NotConverged(String),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Suite(_) => 3,
            Failure::NotConverged(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Suite(m) | Failure::NotConverged(m) => f.write_str(m),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

// Core errors all stem from arguments outside the admissible ranges.
impl From<hgeo_core::Error> for Failure {
    fn from(e: hgeo_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("HGEO_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            Failure::Usage(format!(
                "HGEO_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    let opts = &cli.opts;
    match cli.command {
        Command::Profile => commands::profile(opts),
        Command::Measure => commands::measure(opts),
        Command::Curvature => commands::curvature(opts),
        Command::Solve { mode, max_iter } => commands::solve(opts, mode, max_iter),
        Command::Ode => commands::ode(opts),
        Command::Search => commands::search(opts),
        Command::Check { perturb } => check::run(opts, perturb),
        Command::Constants => commands::constants(opts),
        Command::Flow { x0, y0, rho0 } => commands::flow(opts, [x0, y0], rho0),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on bad flags
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // `hgeo ... | head` closes the pipe early
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hgeo: {e}");
            ExitCode::from(e.code())
        }
    }
}
