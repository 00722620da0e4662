//! Re-deriving the minimiser: the ODE reduction, projected descent on
//! radial and planar discretisations, the multiplier search and the
//! Gâteaux derivative of `ℱ_λ = ℱ + λ𝒢`.

mod gateaux;
mod ode;
mod planar;
mod radial;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::fmt17;

pub use gateaux::{gateaux_derivative, gateaux_derivative_grid};
pub use ode::{lagrange_search, solve_ode, solve_ode_with_nodes, LagrangeResult, OdeProfile};
pub use planar::{c4_asymmetry, circular_spread, solve_2d, solve_2d_from};
pub use radial::{solve_radial, solve_radial_from, RadialSolution};

/// Step policy of the descent loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Always take `step` times the search direction; the run stops
    /// (unconverged) if that would raise the energy.
    Fixed { step: f64 },
    /// Armijo backtracking starting from the full step.
    Backtracking { armijo: f64, shrink: f64 },
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::Backtracking {
            armijo: 1e-4,
            shrink: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid_size: usize,
    pub step_rule: StepRule,
    /// Stop once an iteration lowers the energy by less than this (relative).
    pub tol_energy: f64,
    pub tol_constraint: f64,
    pub max_iter: usize,
    /// Multiplier; `None` selects the critical value `−(Q−2)/R`.
    pub lam: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grid_size: 4096,
            step_rule: StepRule::default(),
            tol_energy: 1e-13,
            tol_constraint: 1e-10,
            max_iter: 10_000,
            lam: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 64 {
            return Err(Error::invalid(format!(
                "grid_size must be at least 64, got {}",
                self.grid_size
            )));
        }
        if !(self.tol_energy > 0.0) || !(self.tol_constraint > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        match self.step_rule {
            StepRule::Fixed { step } if !(step > 0.0) => {
                return Err(Error::invalid("fixed step must be positive"))
            }
            StepRule::Backtracking { armijo, shrink }
                if !(armijo > 0.0 && armijo < 1.0 && shrink > 0.0 && shrink < 1.0) =>
            {
                return Err(Error::invalid("backtracking parameters must lie in (0, 1)"))
            }
            _ => {}
        }
        Ok(())
    }
}

/// Outcome of a descent run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    pub converged: bool,
    /// Energy before the first step and after every accepted step.
    pub energy_trace: Vec<f64>,
    pub constraint_trace: Vec<f64>,
    pub sup_error_trace: Vec<f64>,
    pub final_energy: f64,
    /// `|𝒢[u] − 𝒢[u_R]|`: distance of the volume from the closed-form one.
    pub constraint_residual: f64,
    pub sup_error_vs_closed_form: f64,
}

impl SolverReport {
    pub(crate) fn new() -> Self {
        SolverReport {
            iterations: 0,
            converged: false,
            energy_trace: Vec::new(),
            constraint_trace: Vec::new(),
            sup_error_trace: Vec::new(),
            final_energy: f64::NAN,
            constraint_residual: f64::NAN,
            sup_error_vs_closed_form: f64::NAN,
        }
    }

    pub(crate) fn record(&mut self, energy: f64, constraint: f64, sup_error: f64) {
        self.energy_trace.push(energy);
        self.constraint_trace.push(constraint);
        self.sup_error_trace.push(sup_error);
        self.final_energy = energy;
        self.constraint_residual = constraint;
        self.sup_error_vs_closed_form = sup_error;
    }

    /// Whether the recorded energies never increase.
    pub fn is_monotone(&self) -> bool {
        self.energy_trace.windows(2).all(|w| w[1] <= w[0])
    }

    /// CSV with columns `iter, energy, constraint_residual, sup_error`.
    pub fn write_trace_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "iter,energy,constraint_residual,sup_error")?;
        for k in 0..self.energy_trace.len() {
            writeln!(
                w,
                "{k},{},{},{}",
                fmt17(self.energy_trace[k]),
                fmt17(self.constraint_trace[k]),
                fmt17(self.sup_error_trace[k])
            )?;
        }
        Ok(())
    }
}

// Solves the SPD tridiagonal system in place (Thomas algorithm).
// `lower[i]` couples rows i and i+1.
pub(crate) fn solve_tridiagonal(diag: &[f64], off: &[f64], rhs: &mut [f64]) {
    let m = diag.len();
    if m == 0 {
        return;
    }
    let mut c = vec![0.0; m];
    let mut d = diag[0];
    c[0] = if m > 1 { off[0] / d } else { 0.0 };
    rhs[0] /= d;
    for i in 1..m {
        d = diag[i] - off[i - 1] * c[i - 1];
        if i + 1 < m {
            c[i] = off[i] / d;
        }
        rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / d;
    }
    for i in (0..m - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let small = SolverConfig {
            grid_size: 32,
            ..SolverConfig::default()
        };
        assert!(small.validate().is_err());
        let bad = SolverConfig {
            step_rule: StepRule::Backtracking {
                armijo: 1e-4,
                shrink: 1.5,
            },
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn tridiagonal_solve() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1]  ->  x = [1 1 1]
        let mut rhs = vec![1.0, 0.0, 1.0];
        solve_tridiagonal(&[2.0, 2.0, 2.0], &[-1.0, -1.0], &mut rhs);
        for x in rhs {
            assert!((x - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn trace_csv_has_header_and_rows() {
        let mut r = SolverReport::new();
        r.record(2.0, 0.1, 0.01);
        r.record(1.0, 0.05, 0.005);
        let mut buf = Vec::new();
        r.write_trace_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "iter,energy,constraint_residual,sup_error");
        assert_eq!(lines.len(), 3);
        assert!(r.is_monotone());
    }
}
