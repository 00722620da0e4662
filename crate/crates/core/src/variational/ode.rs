//! The ODE reduction of the radial Euler–Lagrange equation.
//!
//! For `u(z) = f(|z|)` the equation `div[(∇u + z⊥/2)/|∇u + z⊥/2|] = λ`
//! becomes `(r^{2n} F)' = λ r^{2n−1}` with
//! `F = f' / (r √(f'² + r²/4))`. Regularity at the origin forces
//! `F ≡ λ/(2n)`, and inverting the definition of `F` gives
//! `f' = F r² / (2√(1 − F²r²))`, integrated inward from `f(R) = 0`.

use serde::{Deserialize, Serialize};

use crate::closed_form::RadialProfile;
use crate::error::{Error, Result};
use crate::functionals::{volume_radial, RadialGraph};
use crate::heisenberg::GroupContext;
use crate::quadrature::{gl16, panel, Endpoints};

/// Radial profile obtained by integrating the reduced ODE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeProfile {
    n: usize,
    radius: f64,
    lam: f64,
    r: Vec<f64>,
    /// `r^{2n} F(r)` from the RK4 sweep.
    g: Vec<f64>,
    f: Vec<f64>,
    u: Vec<f64>,
}

/// Segments used by [`solve_ode`].
const DEFAULT_SEGMENTS: usize = 1024;

/// Integrates the reduced equation for `−(Q−2)/R ≤ λ < 0` on 1024 segments.
pub fn solve_ode(lam: f64, radius: f64, ctx: GroupContext) -> Result<OdeProfile> {
    solve_ode_with_nodes(lam, radius, ctx, DEFAULT_SEGMENTS)
}

pub fn solve_ode_with_nodes(
    lam: f64,
    radius: f64,
    ctx: GroupContext,
    segments: usize,
) -> Result<OdeProfile> {
    // same admissibility rules as the closed form, including the λ = 0 exclusion
    RadialProfile::new(ctx, radius, lam)?;
    if segments < 2 {
        return Err(Error::invalid("need at least two segments"));
    }
    let n = ctx.n();
    let p = 2 * n as i32 - 1;
    let two_n = (2 * n) as f64;
    let h = radius / segments as f64;
    let r: Vec<f64> = (0..=segments)
        .map(|i| if i == segments { radius } else { i as f64 * h })
        .collect();

    let rhs = |x: f64| lam * x.powi(p);
    let mut g = vec![0.0; segments + 1];
    for i in 0..segments {
        let (a, b) = (r[i], r[i + 1]);
        let step = b - a;
        let k1 = rhs(a);
        // k2 = k3: the right side does not involve G
        let k2 = rhs(a + 0.5 * step);
        let k4 = rhs(b);
        g[i + 1] = g[i] + step / 6.0 * (k1 + 4.0 * k2 + k4);
    }
    let f: Vec<f64> = r
        .iter()
        .zip(&g)
        .map(|(&x, &gx)| {
            if x == 0.0 {
                // G'(r) / (2n r^{2n-1}) as r -> 0
                lam / two_n
            } else {
                gx / x.powi(2 * n as i32)
            }
        })
        .collect();

    let mut prof = OdeProfile {
        n,
        radius,
        lam,
        r,
        g,
        f,
        u: vec![0.0; segments + 1],
    };
    for i in (0..segments).rev() {
        let piece = prof.drop_over(i, prof.r[i]);
        prof.u[i] = prof.u[i + 1] + piece;
    }
    Ok(prof)
}

impl OdeProfile {
    pub fn context(&self) -> GroupContext {
        GroupContext::new(self.n).expect("n >= 1 by construction")
    }

    pub fn lam(&self) -> f64 {
        self.lam
    }

    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    pub fn heights(&self) -> &[f64] {
        &self.u
    }

    /// `r^{2n} F` at the nodes.
    pub fn g_samples(&self) -> &[f64] {
        &self.g
    }

    fn segment(&self, x: f64) -> usize {
        let m = self.r.len() - 1;
        let h = self.radius / m as f64;
        ((x / h) as usize).min(m - 1)
    }

    // Cubic Hermite interpolant of F, with F' = (λ − 2nF)/r from the ODE.
    fn f_at(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (a, b) = (self.r[i], self.r[i + 1]);
        let two_n = (2 * self.n) as f64;
        let d = |k: usize| {
            if self.r[k] == 0.0 {
                0.0
            } else {
                (self.lam - two_n * self.f[k]) / self.r[k]
            }
        };
        let len = b - a;
        let t = (x - a) / len;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.f[i]
            + (t3 - 2.0 * t2 + t) * len * d(i)
            + (-2.0 * t3 + 3.0 * t2) * self.f[i + 1]
            + (t3 - t2) * len * d(i + 1)
    }

    fn slope_at(&self, x: f64) -> f64 {
        let fx = self.f_at(x);
        let fr = fx.abs() * x;
        let w = ((1.0 - fr) * (1.0 + fr)).max(0.0);
        fx * x * x / (2.0 * w.sqrt())
    }

    // u(x) − u(r_{i+1}) = −∫_x^{r_{i+1}} u'
    fn drop_over(&self, i: usize, x: f64) -> f64 {
        let b = self.r[i + 1];
        if x >= b {
            return 0.0;
        }
        let ends = if i + 2 == self.r.len() {
            Endpoints::Right
        } else {
            Endpoints::Regular
        };
        -panel(gl16(), x, b, ends, |y| self.slope_at(y))
    }

    /// `F(r) = f'/(r√(f'² + r²/4))` recomputed from the profile's own
    /// derivative at the interior nodes, as `(r, F)` pairs.
    pub fn reconstructed_f(&self) -> Vec<(f64, f64)> {
        let m = self.r.len() - 1;
        self.r[1..m]
            .iter()
            .map(|&x| {
                let d = self.slope_at(x);
                (x, d / (x * (d * d + x * x / 4.0).sqrt()))
            })
            .collect()
    }

    /// Largest deviation from the closed-form profile with the same `R`, `λ`,
    /// at the nodes and segment midpoints.
    pub fn sup_error_vs_closed_form(&self) -> f64 {
        let exact = RadialProfile::new(self.context(), self.radius, self.lam)
            .expect("validated at construction");
        let mut worst: f64 = 0.0;
        for i in 0..self.r.len() {
            worst = worst.max((self.u[i] - RadialGraph::value(&exact, self.r[i])).abs());
            if i + 1 < self.r.len() {
                let mid = 0.5 * (self.r[i] + self.r[i + 1]);
                worst = worst.max((self.value(mid) - RadialGraph::value(&exact, mid)).abs());
            }
        }
        worst
    }
}

impl RadialGraph for OdeProfile {
    fn radius(&self) -> f64 {
        self.radius
    }

    fn value(&self, x: f64) -> f64 {
        if x >= self.radius {
            return 0.0;
        }
        let i = self.segment(x);
        self.u[i + 1] + self.drop_over(i, x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.slope_at(x)
    }
}

/// Radius and multiplier enclosing a prescribed volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangeResult {
    pub radius: f64,
    pub lam: f64,
    /// `2𝒢` of the ODE profile at the returned radius.
    pub volume: f64,
    pub volume_residual: f64,
    pub iterations: usize,
}

/// Finds `R` with `2𝒢[solve_ode(−(Q−2)/R, R)] = V` by bisection, then
/// returns `(R, −(Q−2)/R)`.
pub fn lagrange_search(volume: f64, ctx: GroupContext) -> Result<LagrangeResult> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::OutOfDomain {
            what: "volume",
            value: volume,
            range: "(0, ∞)".into(),
        });
    }
    let q2 = ctx.qf() - 2.0;
    let enclosed = |radius: f64| -> Result<f64> {
        let prof = solve_ode(-q2 / radius, radius, ctx)?;
        Ok(2.0 * volume_radial(&prof, ctx)?.value)
    };
    let (mut lo, mut hi) = (1.0, 1.0);
    while enclosed(hi)? < volume {
        hi *= 2.0;
    }
    while enclosed(lo)? > volume {
        lo *= 0.5;
    }
    let mut iterations = 0;
    while hi - lo > 2.0 * f64::EPSILON * hi && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if enclosed(mid)? < volume {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let (v_lo, v_hi) = (enclosed(lo)?, enclosed(hi)?);
    let (radius, v) = if (v_lo - volume).abs() <= (v_hi - volume).abs() {
        (lo, v_lo)
    } else {
        (hi, v_hi)
    };
    Ok(LagrangeResult {
        radius,
        lam: -q2 / radius,
        volume: v,
        volume_residual: (v - volume).abs(),
        iterations,
    })
}
