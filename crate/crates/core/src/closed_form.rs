//! Closed-form radial profiles and isoperimetric constants.
//!
//! For `−(Q−2)/R ≤ λ < 0` the Euler–Lagrange equation of the perimeter
//! functional on `B(0, R)` has the spherically symmetric solution
//! `u(z) = ū(|z|²/4)` with
//!
//! ```text
//! ū'(s) = −√(s / (β² − s)),   β = (Q − 2) / (2λ),   ū(R²/4) = 0.
//! ```
//!
//! The critical multiplier `λ = −(Q−2)/R` gives `β² = R²/4` and the
//! candidate isoperimetric profile
//! `u_R(z) = πR²/8 + |z|/4 √(R² − |z|²) − R²/4 · asin(|z|/R)`.
//!
//! The volume and perimeter constants below are expressed through Γ at
//! integer and half-integer arguments and agree with direct quadrature of
//! the radial integrals (see the tests in `tests/closed_form_oracle.rs`).

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::heisenberg::GroupContext;

/// `Γ(m / 2)` for a positive integer `m`, exact up to rounding.
pub fn gamma_half(m: usize) -> f64 {
    assert!(m >= 1, "Γ(m/2) needs m >= 1");
    let (mut acc, mut k) = if m.is_multiple_of(2) {
        (1.0, 2)
    } else {
        (PI.sqrt(), 1)
    };
    // Γ(x + 1) = x Γ(x)
    while k < m {
        acc *= k as f64 / 2.0;
        k += 2;
    }
    acc
}

/// Surface measure of the unit sphere in `ℝ²ⁿ`: `2πⁿ / Γ(n)`.
pub fn sphere_measure(n: usize) -> f64 {
    2.0 * PI.powi(n as i32) / gamma_half(2 * n)
}

/// The radial solution for a given radius and multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    n: usize,
    radius: f64,
    lam: f64,
    beta: f64,
    offset: f64,
}

impl RadialProfile {
    /// Builds the solution for `−(Q−2)/R ≤ λ < 0`.
    pub fn new(ctx: GroupContext, radius: f64, lam: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::OutOfDomain {
                what: "radius",
                value: radius,
                range: "(0, ∞)".into(),
            });
        }
        let q2 = ctx.qf() - 2.0;
        let lower = -q2 / radius;
        if lam == 0.0 {
            return Err(Error::invalid(
                "λ = 0 corresponds to H-minimal surfaces and is excluded",
            ));
        }
        // a few ulps of slack so that the critical λ computed as -(Q-2)/R passes
        if !(lam < 0.0 && lam >= lower * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(Error::OutOfDomain {
                what: "multiplier λ",
                value: lam,
                range: format!("[{lower}, 0)"),
            });
        }
        let beta = q2 / (2.0 * lam);
        let mut p = RadialProfile {
            n: ctx.n(),
            radius,
            lam,
            beta,
            offset: 0.0,
        };
        if p.is_critical() {
            p.beta = -radius / 2.0;
        }
        p.offset = -p.primitive(p.s_max());
        Ok(p)
    }

    /// The critical profile `λ = −(Q−2)/R`.
    pub fn critical(ctx: GroupContext, radius: f64) -> Result<Self> {
        Self::new(ctx, radius, -(ctx.qf() - 2.0) / radius)
    }

    pub fn context(&self) -> GroupContext {
        GroupContext::new(self.n).expect("n >= 1 by construction")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn lam(&self) -> f64 {
        self.lam
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The additive constant fixing `ū(R²/4) = 0`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Right end `R²/4` of the `s`-interval.
    pub fn s_max(&self) -> f64 {
        self.radius * self.radius / 4.0
    }

    /// Whether `β² = R²/4`, i.e. the slope blows up at the rim.
    pub fn is_critical(&self) -> bool {
        let q2 = (2 * self.n) as f64;
        ((self.lam * self.radius + q2) / q2).abs() <= 8.0 * f64::EPSILON
    }

    // ū − C, written with arcsin so that s = β² is harmless
    fn primitive(&self, s: f64) -> f64 {
        let b2 = self.beta * self.beta;
        let s = s.min(b2);
        (s * (b2 - s)).max(0.0).sqrt() - b2 * (s.sqrt() / self.beta.abs()).min(1.0).asin()
    }

    fn check_s(&self, s: f64, allow_end: bool) -> Result<()> {
        let ok = if allow_end {
            s >= 0.0 && s <= self.s_max()
        } else {
            s >= 0.0 && s < self.s_max()
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                what: "s",
                value: s,
                range: if allow_end {
                    format!("[0, {}]", self.s_max())
                } else {
                    format!("[0, {})", self.s_max())
                },
            })
        }
    }

    /// `ū(s)` on `[0, R²/4]`; exactly 0 at the right end.
    pub fn height(&self, s: f64) -> Result<f64> {
        self.check_s(s, true)?;
        Ok(self.height_unchecked(s))
    }

    pub(crate) fn height_unchecked(&self, s: f64) -> f64 {
        if s >= self.s_max() {
            return 0.0;
        }
        (self.offset + self.primitive(s)).max(0.0)
    }

    /// `ū'(s) = −√(s / (β² − s))` on `[0, R²/4)`.
    pub fn slope(&self, s: f64) -> Result<f64> {
        self.check_s(s, false)?;
        Ok(self.slope_unchecked(s))
    }

    pub(crate) fn slope_unchecked(&self, s: f64) -> f64 {
        let b2 = self.beta * self.beta;
        -(s / (b2 - s)).sqrt()
    }

    /// `ū''(s) = −β² / (2 √s (β² − s)^{3/2})`, for `0 < s < R²/4`.
    pub fn second_derivative(&self, s: f64) -> Result<f64> {
        self.check_s(s, false)?;
        if s == 0.0 {
            return Err(Error::OutOfDomain {
                what: "s",
                value: s,
                range: format!("(0, {})", self.s_max()),
            });
        }
        let b2 = self.beta * self.beta;
        Ok(-b2 / (2.0 * s.sqrt() * (b2 - s).powf(1.5)))
    }

    /// `u(r) = ū(r²/4)` as a function of `r = |z|`.
    pub fn height_at_radius(&self, r: f64) -> Result<f64> {
        if !(0.0..=self.radius).contains(&r) {
            return Err(Error::OutOfDomain {
                what: "|z|",
                value: r,
                range: format!("[0, {}]", self.radius),
            });
        }
        Ok(self.height_unchecked(r * r / 4.0))
    }

    /// `du/dr = ū'(r²/4) · r/2`.
    pub fn radial_derivative(&self, r: f64) -> Result<f64> {
        if !(0.0..self.radius).contains(&r) {
            return Err(Error::OutOfDomain {
                what: "|z|",
                value: r,
                range: format!("[0, {})", self.radius),
            });
        }
        Ok(self.slope_unchecked(r * r / 4.0) * r / 2.0)
    }
}

/// The critical profile written directly in `|z|`:
/// `πR²/8 + |z|/4 √(R² − |z|²) − R²/4 asin(|z|/R)`.
pub fn critical_height(radius: f64, r: f64) -> f64 {
    let r = r.clamp(0.0, radius);
    PI * radius * radius / 8.0 + r / 4.0 * (radius * radius - r * r).sqrt()
        - radius * radius / 4.0 * (r / radius).asin()
}

/// Coefficient `c` in `∫_{B(0,R)} u_R = c R^Q`.
pub fn half_volume_coefficient(ctx: GroupContext) -> f64 {
    let q = ctx.q();
    PI.powf((q as f64 - 1.0) / 2.0) * gamma_half(q + 1)
        / (2.0 * (q as f64 - 2.0) * gamma_half(q + 2) * gamma_half(q - 2))
}

/// Coefficient `c` in `ℱ[u_R] = c R^{Q−1}`.
pub fn half_perimeter_coefficient(ctx: GroupContext) -> f64 {
    let q = ctx.q();
    PI.powf((q as f64 - 1.0) / 2.0) * gamma_half(q - 1) / (2.0 * gamma_half(q) * gamma_half(q - 2))
}

/// `∫_{B(0,R)} u_R dz`, the volume of the upper half of the bubble.
pub fn half_volume(radius: f64, ctx: GroupContext) -> f64 {
    half_volume_coefficient(ctx) * radius.powi(ctx.q() as i32)
}

/// `ℱ[u_R]`, the horizontal perimeter of the upper half of the bubble.
pub fn half_perimeter(radius: f64, ctx: GroupContext) -> f64 {
    half_perimeter_coefficient(ctx) * radius.powi(ctx.q() as i32 - 1)
}

/// Multiplier `c_Q` in `R(V) = c_Q V^{1/Q}`.
pub fn radius_coefficient(ctx: GroupContext) -> f64 {
    (2.0 * half_volume_coefficient(ctx)).powf(-1.0 / ctx.qf())
}

/// Radius of the bubble enclosing volume `V`.
pub fn radius_for_volume(volume: f64, ctx: GroupContext) -> Result<f64> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::OutOfDomain {
            what: "volume",
            value: volume,
            range: "(0, ∞)".into(),
        });
    }
    Ok(radius_coefficient(ctx) * volume.powf(1.0 / ctx.qf()))
}

/// The isoperimetric constant
/// `C_Q = (Q−1) Γ(Q/2)^{2/Q} / (Q^{(Q−1)/Q} (Q−2) Γ((Q+1)/2)^{1/Q} π^{(Q−1)/(2Q)})`.
pub fn iso_constant(ctx: GroupContext) -> f64 {
    let q = ctx.qf();
    (q - 1.0) * gamma_half(ctx.q()).powf(2.0 / q)
        / (q.powf((q - 1.0) / q)
            * (q - 2.0)
            * gamma_half(ctx.q() + 1).powf(1.0 / q)
            * PI.powf((q - 1.0) / (2.0 * q)))
}

/// `|E|^{(Q−1)/Q} / P_H(E)` for the bubble of radius `R`, from the
/// volume and perimeter constants.
pub fn iso_ratio_of_bubble(radius: f64, ctx: GroupContext) -> f64 {
    let q = ctx.qf();
    (2.0 * half_volume(radius, ctx)).powf((q - 1.0) / q) / (2.0 * half_perimeter(radius, ctx))
}

/// All closed-form constants for one group and radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsoConstants {
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    pub radius_coefficient: f64,
    pub lam: f64,
    pub volume_half: f64,
    pub perimeter_half: f64,
    #[serde(rename = "C_Q")]
    pub c_q: f64,
    pub h_curv: f64,
}

impl IsoConstants {
    pub fn new(ctx: GroupContext, radius: f64) -> Self {
        let q2 = ctx.qf() - 2.0;
        IsoConstants {
            q: ctx.q(),
            radius,
            radius_coefficient: radius_coefficient(ctx),
            lam: -q2 / radius,
            volume_half: half_volume(radius, ctx),
            perimeter_half: half_perimeter(radius, ctx),
            c_q: iso_constant(ctx),
            h_curv: q2 / radius,
        }
    }
}

/// One-sided limits of a derivative at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSidedLimits {
    pub order: u32,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub steps: Vec<f64>,
    pub limits: Vec<OneSidedLimits>,
}

impl RegularityReport {
    pub fn order(&self, k: u32) -> Option<OneSidedLimits> {
        self.limits.iter().copied().find(|l| l.order == k)
    }
}

/// `u₁(x) = π/8 + x/4 √(1 − x²) − asin(x)/4`, the normalized profile in `|z|`.
pub fn normalized_profile(x: f64) -> f64 {
    critical_height(1.0, x)
}

/// Estimates the one-sided limits at `x = 0` of the first three
/// derivatives of the even extension `x ↦ u₁(|x|)`.
///
/// Each derivative is taken with a 4-point one-sided stencil at steps
/// `h, h/2, h/4` and Richardson-extrapolated, using that the stencil
/// error of order `k` expands in powers `h^{4−k}, h^{5−k}, …`.
pub fn regularity_probe(ctx: GroupContext) -> RegularityReport {
    // the normalized one-variable profile does not depend on n
    let _ = ctx;
    let steps = vec![1e-2, 5e-3, 2.5e-3];
    let even = |x: f64| normalized_profile(x.abs());
    let limits = (1..=3u32)
        .map(|k| {
            let right: Vec<f64> = steps.iter().map(|&h| one_sided(&even, k, h)).collect();
            let left: Vec<f64> = steps.iter().map(|&h| one_sided(&even, k, -h)).collect();
            let p0 = (4 - k) as i32;
            OneSidedLimits {
                order: k,
                left: richardson(&left, p0),
                right: richardson(&right, p0),
            }
        })
        .collect();
    RegularityReport { steps, limits }
}

// Forward (h > 0) or backward (h < 0) 4-point stencil for the k-th derivative at 0.
fn one_sided<F: Fn(f64) -> f64>(f: &F, k: u32, h: f64) -> f64 {
    let f0 = f(0.0);
    let f1 = f(h);
    let f2 = f(2.0 * h);
    let f3 = f(3.0 * h);
    match k {
        1 => (-11.0 * f0 + 18.0 * f1 - 9.0 * f2 + 2.0 * f3) / (6.0 * h),
        2 => (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h),
        3 => (-f0 + 3.0 * f1 - 3.0 * f2 + f3) / (h * h * h),
        _ => unreachable!("stencils exist for k = 1, 2, 3"),
    }
}

// Richardson table for step ratio 2 and error powers p0, p0+1, ...
fn richardson(values: &[f64], p0: i32) -> f64 {
    let mut row = values.to_vec();
    let mut p = p0;
    while row.len() > 1 {
        let factor = 2f64.powi(p);
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        p += 1;
    }
    row[0]
}
