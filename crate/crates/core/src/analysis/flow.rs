//! Characteristic curves of the transport equation
//! `(x/2 − ū'y/2) ρ_x + (y/2 + ū'x/2) ρ_y + ρ = 0` for the critical
//! profile in `ℍ¹`.
//!
//! Along `x' = x/2 − ū'y/2`, `y' = y/2 + ū'x/2`, with `ū'` taken at
//! `|z|²/4`, the modulus obeys `|z(s)|² = |z₀|² eˢ` and `ρ(z(s)) = ρ₀ e⁻ˢ`. The curve
//! reaches the boundary circle at `s = 2 log(R/|z₀|)` and the centre only
//! as `s → −∞`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of a characteristic curve with the transported value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveState {
    pub z: [f64; 2],
    pub s: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub s_min: f64,
    /// Defaults to `2 log(R/|z₀|) − 1e−9`.
    pub s_end: Option<f64>,
    /// Largest step; halved until the step-doubling error is below `tol`.
    pub max_step: f64,
    pub tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            s_min: -10.0,
            s_end: None,
            max_step: 1e-3,
            tol: 1e-13,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub z0: [f64; 2],
    pub rho0: f64,
    pub radius: f64,
    /// Ascending in `s`, including `s = 0`.
    pub states: Vec<CurveState>,
    pub rejected_steps: usize,
}

// ū'(|z|²/4) for the critical profile: −|z| / √(R² − |z|²)
fn slope(radius: f64, z: [f64; 2]) -> f64 {
    let r2 = z[0] * z[0] + z[1] * z[1];
    -(r2 / ((radius - r2.sqrt()) * (radius + r2.sqrt()))).sqrt()
}

fn field(radius: f64, z: [f64; 2]) -> [f64; 2] {
    let d = slope(radius, z);
    [0.5 * z[0] - 0.5 * d * z[1], 0.5 * z[1] + 0.5 * d * z[0]]
}

fn rk4(radius: f64, z: [f64; 2], h: f64) -> [f64; 2] {
    let add = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * b[0], a[1] + t * b[1]];
    let k1 = field(radius, z);
    let k2 = field(radius, add(z, k1, 0.5 * h));
    let k3 = field(radius, add(z, k2, 0.5 * h));
    let k4 = field(radius, add(z, k3, h));
    [
        z[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        z[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Fixed-step RK4 from `s = 0` to `s_end` with `steps` equal steps.
pub fn rk4_fixed(radius: f64, z0: [f64; 2], s_end: f64, steps: usize) -> [f64; 2] {
    let h = s_end / steps as f64;
    (0..steps).fold(z0, |z, _| rk4(radius, z, h))
}

// Integrates from s = 0 to `target` (either direction), pushing states.
fn sweep(
    radius: f64,
    z0: [f64; 2],
    rho0: f64,
    target: f64,
    cfg: &FlowConfig,
    out: &mut Vec<CurveState>,
) -> usize {
    let dir = target.signum();
    let mut s = 0.0;
    let mut z = z0;
    let mut h = cfg.max_step;
    let mut rejected = 0;
    while (target - s) * dir > 0.0 {
        let step = h.min((target - s) * dir);
        let full = rk4(radius, z, dir * step);
        let mid = rk4(radius, z, 0.5 * dir * step);
        let half = rk4(radius, mid, 0.5 * dir * step);
        let scale = half[0].hypot(half[1]).max(1e-300);
        let err = (full[0] - half[0]).hypot(full[1] - half[1]) / 15.0;
        if err > cfg.tol * scale && step > 1e-14 {
            h = 0.5 * step;
            rejected += 1;
            continue;
        }
        z = half;
        s = if step == (target - s) * dir {
            target
        } else {
            s + dir * step
        };
        out.push(CurveState {
            z,
            s,
            rho: rho0 * (-s).exp(),
        });
        if err < cfg.tol * scale / 64.0 {
            h = (2.0 * step).min(cfg.max_step);
        }
    }
    rejected
}

/// Integrates the characteristic system through `z₀` over
/// `[s_min, s_end]`, with `s_end < 2 log(R/|z₀|)` where the slope blows up.
pub fn characteristic_flow(
    z0: [f64; 2],
    rho0: f64,
    radius: f64,
    cfg: &FlowConfig,
) -> Result<Trajectory> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::OutOfDomain {
            what: "radius",
            value: radius,
            range: "(0, ∞)".into(),
        });
    }
    let r0 = z0[0].hypot(z0[1]);
    if !(r0 > 0.0) || r0 >= radius {
        return Err(Error::invalid(format!(
            "the starting point must satisfy 0 < |z0| < R, got |z0| = {r0}"
        )));
    }
    if !rho0.is_finite() {
        return Err(Error::invalid("rho0 must be finite"));
    }
    let s_rim = 2.0 * (radius / r0).ln();
    let s_end = cfg.s_end.unwrap_or(s_rim - 1e-9);
    if !(s_end < s_rim) || !(cfg.s_min <= 0.0) || !(s_end >= 0.0) {
        return Err(Error::invalid(format!(
            "need s_min <= 0 <= s_end < 2 log(R/|z0|) = {s_rim}"
        )));
    }
    if !(cfg.max_step > 0.0) || !(cfg.tol > 0.0) {
        return Err(Error::invalid("max_step and tol must be positive"));
    }
    let mut back = Vec::new();
    let mut rejected = sweep(radius, z0, rho0, cfg.s_min, cfg, &mut back);
    let mut states: Vec<CurveState> = back.into_iter().rev().collect();
    states.push(CurveState {
        z: z0,
        s: 0.0,
        rho: rho0,
    });
    rejected += sweep(radius, z0, rho0, s_end, cfg, &mut states);
    Ok(Trajectory {
        z0,
        rho0,
        radius,
        states,
        rejected_steps: rejected,
    })
}

impl Trajectory {
    fn r0_sq(&self) -> f64 {
        self.z0[0] * self.z0[0] + self.z0[1] * self.z0[1]
    }

    /// `max |(|z(s)|² / (|z₀|² eˢ)) − 1|`.
    pub fn radius_law_error(&self) -> f64 {
        let r0 = self.r0_sq();
        self.states
            .iter()
            .map(|st| ((st.z[0] * st.z[0] + st.z[1] * st.z[1]) / (r0 * st.s.exp()) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Relative mismatch between the transported `ρ₀e⁻ˢ` and the solution
    /// `ρ(z) = ρ₀|z₀|²/|z|²` of the transport equation, read at the
    /// numerical positions.
    pub fn transport_residual(&self) -> f64 {
        if self.rho0 == 0.0 {
            return 0.0;
        }
        let r0 = self.r0_sq();
        self.states
            .iter()
            .map(|st| {
                let field = self.rho0 * r0 / (st.z[0] * st.z[0] + st.z[1] * st.z[1]);
                ((field - st.rho) / st.rho).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `ρ₀² e^{−2s}/4 · |z₀|² e^{2s} · [|z|²/(R² − |z|²) + 1]` along the
    /// curve, the expression whose `s → −∞` limit is `ρ₀²|z₀|²/4`.
    pub fn printed_gradient_sq(&self, st: &CurveState) -> f64 {
        let r2 = st.z[0] * st.z[0] + st.z[1] * st.z[1];
        let rr = self.radius * self.radius;
        self.rho0 * self.rho0 * (-2.0 * st.s).exp() / 4.0
            * self.r0_sq()
            * (2.0 * st.s).exp()
            * (r2 / (rr - r2) + 1.0)
    }

    /// `|ρ (∇u_R + z⊥/2)|² = ρ²|z|²(ū'² + 1)/4` at the state.
    pub fn gradient_sq(&self, st: &CurveState) -> f64 {
        let r2 = st.z[0] * st.z[0] + st.z[1] * st.z[1];
        let d = slope(self.radius, st.z);
        st.rho * st.rho * r2 * (d * d + 1.0) / 4.0
    }

    /// Limit of [`Self::printed_gradient_sq`] at the centre, extrapolated
    /// from the two states nearest `s_min` and `s_min + 1` (the expression
    /// is `L + c eˢ + O(e^{2s})`).
    pub fn center_limit(&self) -> f64 {
        let first = self.states[0];
        let target = first.s + 1.0;
        let second = self
            .states
            .iter()
            .min_by(|a, b| (a.s - target).abs().total_cmp(&(b.s - target).abs()))
            .copied()
            .unwrap_or(first);
        let (g1, g2) = (
            self.printed_gradient_sq(&first),
            self.printed_gradient_sq(&second),
        );
        let (e1, e2) = (first.s.exp(), second.s.exp());
        if e2 == e1 {
            return g1;
        }
        (g1 * e2 - g2 * e1) / (e2 - e1)
    }

    /// `ρ₀²|z₀|²/4`.
    pub fn expected_center_limit(&self) -> f64 {
        self.rho0 * self.rho0 * self.r0_sq() / 4.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_grows_exponentially() {
        let t = characteristic_flow([0.3, 0.2], 1.0, 1.0, &FlowConfig::default()).unwrap();
        assert!(t.radius_law_error() < 1e-10, "{}", t.radius_law_error());
        assert!(t.transport_residual() < 1e-9);
        assert!(t.states.windows(2).all(|w| w[0].s < w[1].s));
        assert_eq!(t.states[0].s, -10.0);
    }

    #[test]
    fn centre_limit_of_the_printed_expression() {
        for rho0 in [-1.0, -0.5, 0.5, 1.0] {
            let t = characteristic_flow([0.5, 0.0], rho0, 1.0, &FlowConfig::default()).unwrap();
            let rel =
                (t.center_limit() - t.expected_center_limit()).abs() / t.expected_center_limit();
            assert!(rel < 1e-8, "{rho0}: {rel}");
            // the product itself grows like e^{-s}
            let direct = t.gradient_sq(&t.states[0]);
            assert!(direct > 1e3 * t.expected_center_limit());
        }
    }

    #[test]
    fn rejects_bad_starts() {
        let cfg = FlowConfig::default();
        assert!(characteristic_flow([0.0, 0.0], 1.0, 1.0, &cfg).is_err());
        assert!(characteristic_flow([1.0, 0.0], 1.0, 1.0, &cfg).is_err());
        let past = FlowConfig {
            s_end: Some(2.0 * (1.0f64 / 0.5).ln()),
            ..cfg
        };
        assert!(characteristic_flow([0.5, 0.0], 1.0, 1.0, &past).is_err());
    }
}
