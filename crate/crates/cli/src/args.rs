use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 20240917;

/// Isoperimetric profiles, functionals and property checks in the
/// Heisenberg group.
#[derive(Debug, Parser)]
#[command(name = "hgeo", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Args)]
pub struct Opts {
    /// Dimension n of ℍⁿ (Q = 2n + 2)
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,

    /// Radius of the base ball
    #[arg(
        long = "R",
        global = true,
        conflicts_with = "volume",
        allow_negative_numbers = true
    )]
    pub radius: Option<f64>,

    /// Enclosed volume; the radius follows from it
    #[arg(long = "V", global = true, allow_negative_numbers = true)]
    pub volume: Option<f64>,

    /// Lagrange multiplier (defaults to the critical value −(Q−2)/R)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lam: Option<f64>,

    /// Number of samples, or grid cells for `solve`
    #[arg(long, global = true)]
    pub grid: Option<usize>,

    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Solver or integrator tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Radial,
    Planar,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Samples of the critical profile u_R and its derivative
    Profile,
    /// Horizontal perimeter, volume and isoperimetric ratio of the bubble
    Measure,
    /// H-mean curvature along the profile
    Curvature,
    /// Constrained descent towards the minimizer
    Solve {
        #[arg(long, value_enum, default_value = "radial")]
        mode: Mode,
        /// Iteration cap of the descent loop
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Profile from the first-order radial ODE
    Ode,
    /// Radius and multiplier enclosing the volume given by --V
    Search,
    /// Runs the property suites and exits 3 if any fails
    Check {
        /// Relative shift applied to the stored reference constants
        #[arg(long, hide = true, allow_negative_numbers = true)]
        perturb: Option<f64>,
    },
    /// Closed-form constants for the given n and radius
    Constants,
    /// Characteristic curve through (x0, y0) with transported value rho0
    Flow {
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        y0: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        rho0: f64,
    },
}
