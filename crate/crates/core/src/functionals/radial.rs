//! Perimeter and volume of spherically symmetric graphs in `ℍⁿ`.
//!
//! For `u(z) = f(|z|)` on `B(0, R) ⊂ ℝ²ⁿ`,
//!
//! ```text
//! ℱ[u] = σ_{2n−1} ∫₀^R √(f'(r)² + r²/4) r^{2n−1} dr
//! 𝒢[u] = σ_{2n−1} ∫₀^R f(r) r^{2n−1} dr
//! ```
//!
//! where `σ_{2n−1}` is the measure of the unit sphere of `ℝ²ⁿ`.

use crate::closed_form::{sphere_measure, RadialProfile};
use crate::error::{Error, Result};
use crate::heisenberg::GroupContext;
use crate::quadrature::{self, Endpoints, Estimate};

/// A function `f(|z|)` on a closed ball, vanishing on its boundary.
pub trait RadialGraph: Sync {
    fn radius(&self) -> f64;
    fn value(&self, r: f64) -> f64;
    /// `f'(r)` for `0 ≤ r < R`.
    fn derivative(&self, r: f64) -> f64;
    /// Interior radii where `f` is not smooth (kinks of piecewise graphs).
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl RadialGraph for RadialProfile {
    fn radius(&self) -> f64 {
        RadialProfile::radius(self)
    }
    fn value(&self, r: f64) -> f64 {
        self.height_unchecked(r * r / 4.0)
    }
    fn derivative(&self, r: f64) -> f64 {
        self.slope_unchecked(r * r / 4.0) * r / 2.0
    }
}

impl<G: RadialGraph + ?Sized> RadialGraph for &G {
    fn radius(&self) -> f64 {
        (**self).radius()
    }
    fn value(&self, r: f64) -> f64 {
        (**self).value(r)
    }
    fn derivative(&self, r: f64) -> f64 {
        (**self).derivative(r)
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

/// Radial graph given by closures for the value and the derivative.
pub struct RadialFn<V, D> {
    radius: f64,
    value: V,
    derivative: D,
    kinks: Vec<f64>,
}

impl<V, D> RadialFn<V, D>
where
    V: Fn(f64) -> f64 + Sync,
    D: Fn(f64) -> f64 + Sync,
{
    pub fn new(radius: f64, value: V, derivative: D) -> Self {
        RadialFn {
            radius,
            value,
            derivative,
            kinks: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }
}

impl<V, D> RadialGraph for RadialFn<V, D>
where
    V: Fn(f64) -> f64 + Sync,
    D: Fn(f64) -> f64 + Sync,
{
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, r: f64) -> f64 {
        (self.value)(r)
    }
    fn derivative(&self, r: f64) -> f64 {
        (self.derivative)(r)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.kinks.clone()
    }
}

/// The group dilation of a graph: `u_λ(z) = λ² u(z/λ)` on `B(0, λR)`.
pub struct Dilated<G> {
    inner: G,
    factor: f64,
}

impl<G: RadialGraph> Dilated<G> {
    pub fn new(inner: G, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::OutOfDomain {
                what: "dilation factor",
                value: factor,
                range: "(0, ∞)".into(),
            });
        }
        Ok(Dilated { inner, factor })
    }
}

impl<G: RadialGraph> Dilated<G> {
    // r/λ can round past the inner rim, where profiles have infinite slope
    fn pull_back(&self, r: f64) -> f64 {
        if r >= self.radius() {
            self.inner.radius()
        } else {
            (r / self.factor).min(self.inner.radius())
        }
    }
}

impl<G: RadialGraph> RadialGraph for Dilated<G> {
    fn radius(&self) -> f64 {
        self.factor * self.inner.radius()
    }
    fn value(&self, r: f64) -> f64 {
        self.factor * self.factor * self.inner.value(self.pull_back(r))
    }
    fn derivative(&self, r: f64) -> f64 {
        self.factor * self.inner.derivative(self.pull_back(r))
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner
            .breakpoints()
            .into_iter()
            .map(|b| b * self.factor)
            .collect()
    }
}

/// Multiple `κ u` of a radial graph.
pub struct Scaled<G> {
    inner: G,
    factor: f64,
}

impl<G: RadialGraph> Scaled<G> {
    pub fn new(inner: G, factor: f64) -> Self {
        Scaled { inner, factor }
    }
}

impl<G: RadialGraph> RadialGraph for Scaled<G> {
    fn radius(&self) -> f64 {
        self.inner.radius()
    }
    fn value(&self, r: f64) -> f64 {
        self.factor * self.inner.value(r)
    }
    fn derivative(&self, r: f64) -> f64 {
        self.factor * self.inner.derivative(r)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

/// Panels per smooth piece.
const PANELS: usize = 8;

fn validate<G: RadialGraph + ?Sized>(u: &G) -> Result<f64> {
    let radius = u.radius();
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::OutOfDomain {
            what: "radius",
            value: radius,
            range: "(0, ∞)".into(),
        });
    }
    let scale = u.value(0.0).abs().max(radius * radius);
    let rim = u.value(radius);
    if !(rim.abs() <= 1e-12 * scale) {
        return Err(Error::invalid(format!(
            "graph must vanish on the boundary sphere, found u(R) = {rim}"
        )));
    }
    Ok(radius)
}

// Integrates over [0, R], splitting at breakpoints; the piece ending at R
// gets the square-root endpoint substitution.
fn integrate_pieces<G, F>(u: &G, f: F) -> Estimate
where
    G: RadialGraph + ?Sized,
    F: Fn(f64) -> f64,
{
    let radius = u.radius();
    let mut cuts: Vec<f64> = u
        .breakpoints()
        .into_iter()
        .filter(|b| *b > 0.0 && *b < radius)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = vec![0.0];
    edges.extend(cuts);
    edges.push(radius);
    let mut total = Estimate {
        value: 0.0,
        error: 0.0,
    };
    for w in edges.windows(2) {
        let ends = if w[1] == radius {
            Endpoints::Right
        } else {
            Endpoints::Regular
        };
        let piece = quadrature::integrate(w[0], w[1], PANELS, ends, &f);
        total.value += piece.value;
        total.error += piece.error;
    }
    total
}

/// `ℱ[u]` for a radial graph, with an error estimate.
pub fn h_perimeter_radial<G: RadialGraph + ?Sized>(u: &G, ctx: GroupContext) -> Result<Estimate> {
    validate(u)?;
    let power = 2 * ctx.n() as i32 - 1;
    let sigma = sphere_measure(ctx.n());
    let est = integrate_pieces(u, |r| {
        let d = u.derivative(r);
        (d * d + r * r / 4.0).sqrt() * r.powi(power)
    });
    Ok(Estimate {
        value: sigma * est.value,
        error: sigma * est.error,
    })
}

/// `𝒢[u] = ∫ u` for a radial graph, with an error estimate.
pub fn volume_radial<G: RadialGraph + ?Sized>(u: &G, ctx: GroupContext) -> Result<Estimate> {
    validate(u)?;
    let power = 2 * ctx.n() as i32 - 1;
    let sigma = sphere_measure(ctx.n());
    let est = integrate_pieces(u, |r| u.value(r) * r.powi(power));
    Ok(Estimate {
        value: sigma * est.value,
        error: sigma * est.error,
    })
}

/// `ℱ[u] + λ 𝒢[u]`.
pub fn energy_radial<G: RadialGraph + ?Sized>(u: &G, lam: f64, ctx: GroupContext) -> Result<f64> {
    Ok(h_perimeter_radial(u, ctx)?.value + lam * volume_radial(u, ctx)?.value)
}

/// `(2·vol)^{(Q−1)/Q} / (2·per)`: the isoperimetric quotient of the set
/// bounded by `t = ±u`.
pub fn iso_ratio(volume_half: f64, perimeter_half: f64, ctx: GroupContext) -> f64 {
    let q = ctx.qf();
    (2.0 * volume_half).powf((q - 1.0) / q) / (2.0 * perimeter_half)
}
