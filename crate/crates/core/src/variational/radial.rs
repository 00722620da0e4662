//! Projected descent for `ℱ_λ` restricted to radial graphs.
//!
//! The unknown is piecewise linear on the graded mesh
//! `r_i = R sin(π i / 2M)`, `i = 0..M`, with `u(r_M) = 0`. The mesh is
//! fine at the rim, where the critical profile behaves like `√(R − r)`.
//! Each cell is integrated with 3-point Gauss–Legendre, which is exact for
//! the volume term when `n ≤ 2`.

use serde::{Deserialize, Serialize};

use super::{solve_tridiagonal, SolverConfig, SolverReport, StepRule};
use crate::closed_form::{sphere_measure, RadialProfile};
use crate::error::Result;
use crate::functionals::RadialGraph;
use crate::heisenberg::GroupContext;

const GL3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GL3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Piecewise linear radial graph returned by [`solve_radial`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialSolution {
    fn cell(&self, r: f64) -> usize {
        let last = self.nodes.len() - 2;
        match self.nodes.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        }
    }
}

impl RadialGraph for RadialSolution {
    fn radius(&self) -> f64 {
        *self.nodes.last().expect("non-empty mesh")
    }
    fn value(&self, r: f64) -> f64 {
        if r >= self.radius() {
            return 0.0;
        }
        let c = self.cell(r);
        let (a, b) = (self.nodes[c], self.nodes[c + 1]);
        let t = (r - a) / (b - a);
        self.values[c] * (1.0 - t) + self.values[c + 1] * t
    }
    fn derivative(&self, r: f64) -> f64 {
        let c = self.cell(r);
        (self.values[c + 1] - self.values[c]) / (self.nodes[c + 1] - self.nodes[c])
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.nodes[1..self.nodes.len() - 1].to_vec()
    }
}

struct Discretization {
    lam: f64,
    nodes: Vec<f64>,
    width: Vec<f64>,
    /// Quadrature radii and weights (σ, Jacobian and r^{2n−1} folded in).
    qr: Vec<[f64; 3]>,
    qw: Vec<[f64; 3]>,
    /// `𝒢[u] = Σ mass_i u_i`.
    mass: Vec<f64>,
}

impl Discretization {
    fn new(ctx: GroupContext, radius: f64, cells: usize, lam: f64) -> Self {
        let nodes: Vec<f64> = (0..=cells)
            .map(|i| {
                if i == cells {
                    radius
                } else {
                    radius * (std::f64::consts::FRAC_PI_2 * i as f64 / cells as f64).sin()
                }
            })
            .collect();
        let sigma = sphere_measure(ctx.n());
        let power = 2 * ctx.n() as i32 - 1;
        let mut width = Vec::with_capacity(cells);
        let mut qr = Vec::with_capacity(cells);
        let mut qw = Vec::with_capacity(cells);
        let mut mass = vec![0.0; cells + 1];
        for c in 0..cells {
            let (a, b) = (nodes[c], nodes[c + 1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut rr = [0.0; 3];
            let mut ww = [0.0; 3];
            for q in 0..3 {
                let r = mid + half * GL3_NODES[q];
                rr[q] = r;
                ww[q] = sigma * GL3_WEIGHTS[q] * half * r.powi(power);
                mass[c] += ww[q] * (b - r) / (b - a);
                mass[c + 1] += ww[q] * (r - a) / (b - a);
            }
            width.push(b - a);
            qr.push(rr);
            qw.push(ww);
        }
        mass.pop();
        Discretization {
            lam,
            nodes,
            width,
            qr,
            qw,
            mass,
        }
    }

    fn cells(&self) -> usize {
        self.width.len()
    }

    #[inline]
    fn slope(&self, u: &[f64], c: usize) -> f64 {
        let right = if c + 1 < u.len() { u[c + 1] } else { 0.0 };
        (right - u[c]) / self.width[c]
    }

    fn perimeter(&self, u: &[f64]) -> f64 {
        (0..self.cells())
            .map(|c| {
                let d = self.slope(u, c);
                (0..3)
                    .map(|q| self.qw[c][q] * (d * d + self.qr[c][q] * self.qr[c][q] / 4.0).sqrt())
                    .sum::<f64>()
            })
            .sum()
    }

    fn volume(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.mass).map(|(a, b)| a * b).sum()
    }

    fn energy(&self, u: &[f64]) -> f64 {
        self.perimeter(u) + self.lam * self.volume(u)
    }

    /// Gradient, and the tridiagonal Hessian as (diagonal, off-diagonal).
    fn derivatives(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let m = u.len();
        let mut grad: Vec<f64> = self.mass.iter().map(|w| self.lam * w).collect();
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m.saturating_sub(1)];
        for c in 0..self.cells() {
            let d = self.slope(u, c);
            let mut p1 = 0.0;
            let mut p2 = 0.0;
            for q in 0..3 {
                let a2 = self.qr[c][q] * self.qr[c][q] / 4.0;
                let s = (d * d + a2).sqrt();
                p1 += self.qw[c][q] * d / s;
                p2 += self.qw[c][q] * a2 / (s * s * s);
            }
            let w = self.width[c];
            let k = p2 / (w * w);
            grad[c] -= p1 / w;
            diag[c] += k;
            if c + 1 < m {
                grad[c + 1] += p1 / w;
                diag[c + 1] += k;
                off[c] -= k;
            }
        }
        (grad, diag, off)
    }
}

/// Descent from the default start `u₀(r) = 0.1 (1 − (r/R)²)`.
pub fn solve_radial(
    cfg: &SolverConfig,
    radius: f64,
    ctx: GroupContext,
) -> Result<(RadialSolution, SolverReport)> {
    solve_radial_from(cfg, radius, ctx, |r| 0.1 * (1.0 - (r / radius).powi(2)))
}

/// Projected Newton-type descent on the discretized `ℱ + λ𝒢` over
/// `{u ≥ 0, u(R) = 0}`.
///
/// The search direction solves the tridiagonal Newton system on the free
/// nodes; nodes held at 0 by the projection with an outward-pointing
/// gradient are frozen.
pub fn solve_radial_from<F: Fn(f64) -> f64>(
    cfg: &SolverConfig,
    radius: f64,
    ctx: GroupContext,
    init: F,
) -> Result<(RadialSolution, SolverReport)> {
    cfg.validate()?;
    let lam = cfg.lam.unwrap_or(-(ctx.qf() - 2.0) / radius);
    let exact = RadialProfile::new(ctx, radius, lam)?;
    let disc = Discretization::new(ctx, radius, cfg.grid_size, lam);
    let m = disc.cells();
    let reference: Vec<f64> = disc.nodes[..m].iter().map(|&r| exact.value(r)).collect();
    let target_volume = disc.volume(&reference);
    let mut u: Vec<f64> = disc.nodes[..m].iter().map(|&r| init(r).max(0.0)).collect();

    let sup_error = |u: &[f64]| {
        u.iter()
            .zip(&reference)
            .fold(0.0f64, |e, (a, b)| e.max((a - b).abs()))
    };
    let mut report = SolverReport::new();
    let mut energy = disc.energy(&u);
    report.record(
        energy,
        (disc.volume(&u) - target_volume).abs(),
        sup_error(&u),
    );

    for _ in 0..cfg.max_iter {
        let (grad, mut diag, mut off) = disc.derivatives(&u);
        let mut dir: Vec<f64> = grad.iter().map(|g| -g).collect();
        for i in 0..m {
            if u[i] <= 0.0 && grad[i] > 0.0 {
                diag[i] = 1.0;
                dir[i] = 0.0;
                if i > 0 {
                    off[i - 1] = 0.0;
                }
                if i < m - 1 {
                    off[i] = 0.0;
                }
            }
        }
        solve_tridiagonal(&diag, &off, &mut dir);

        let trial = |t: f64| -> Vec<f64> {
            u.iter()
                .zip(&dir)
                .map(|(a, d)| (a + t * d).max(0.0))
                .collect()
        };
        let decrease = |next: &[f64]| -> f64 {
            grad.iter()
                .zip(next.iter().zip(&u))
                .map(|(g, (a, b))| g * (a - b))
                .sum()
        };
        let accepted = match cfg.step_rule {
            StepRule::Fixed { step } => {
                let next = trial(step);
                let e = disc.energy(&next);
                (e <= energy).then_some((next, e))
            }
            StepRule::Backtracking { armijo, shrink } => {
                let mut t = 1.0;
                let mut found = None;
                while t > 1e-12 {
                    let next = trial(t);
                    let e = disc.energy(&next);
                    if e <= energy + armijo * decrease(&next) {
                        found = Some((next, e));
                        break;
                    }
                    t *= shrink;
                }
                found
            }
        };
        let Some((next, e)) = accepted else {
            // no admissible decrease left: stationary up to rounding for
            // backtracking, a failed fixed step otherwise
            report.converged = matches!(cfg.step_rule, StepRule::Backtracking { .. });
            break;
        };
        let drop = energy - e;
        u = next;
        energy = e;
        report.iterations += 1;
        report.record(
            energy,
            (disc.volume(&u) - target_volume).abs(),
            sup_error(&u),
        );
        if drop <= cfg.tol_energy * energy.abs().max(1.0) {
            report.converged = true;
            break;
        }
    }

    let mut values = u;
    values.push(0.0);
    Ok((
        RadialSolution {
            n: ctx.n(),
            nodes: disc.nodes,
            values,
        },
        report,
    ))
}
