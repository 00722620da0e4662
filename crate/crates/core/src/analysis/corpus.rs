//! A corpus of admissible radial graphs on `B(0, R)` for testing the
//! isoperimetric inequality and its equality case.

use serde::{Deserialize, Serialize};

use crate::closed_form::{iso_constant, RadialProfile};
use crate::error::Result;
use crate::functionals::{h_perimeter_radial, iso_ratio, volume_radial, RadialFn, RadialGraph};
use crate::heisenberg::GroupContext;

type Scalar = Box<dyn Fn(f64) -> f64 + Sync + Send>;

pub struct CorpusGraph {
    pub name: String,
    graph: RadialFn<Scalar, Scalar>,
}

impl RadialGraph for CorpusGraph {
    fn radius(&self) -> f64 {
        self.graph.radius()
    }
    fn value(&self, r: f64) -> f64 {
        self.graph.value(r)
    }
    fn derivative(&self, r: f64) -> f64 {
        self.graph.derivative(r)
    }
}

fn entry<V, D>(name: String, radius: f64, value: V, derivative: D) -> CorpusGraph
where
    V: Fn(f64) -> f64 + Sync + Send + 'static,
    D: Fn(f64) -> f64 + Sync + Send + 'static,
{
    CorpusGraph {
        name,
        graph: RadialFn::new(radius, Box::new(value), Box::new(derivative)),
    }
}

/// 22 non-optimal admissible graphs: cones, paraboloids, quartic caps,
/// spherical caps, vertically scaled bubbles, perturbed bubbles, a
/// subcritical profile and a power of the bubble.
pub fn isoperimetric_corpus(ctx: GroupContext, radius: f64) -> Result<Vec<CorpusGraph>> {
    let bubble = RadialProfile::critical(ctx, radius)?;
    let rr = radius * radius;
    let mut out = Vec::new();
    for c in [0.25, 0.5, 1.0, 2.0] {
        out.push(entry(
            format!("cone c={c}"),
            radius,
            move |r| c * (radius - r),
            move |_| -c,
        ));
    }
    for c in [0.25, 0.4, 0.6, 1.0] {
        out.push(entry(
            format!("paraboloid c={c}"),
            radius,
            move |r| c * (rr - r * r),
            move |r| -2.0 * c * r,
        ));
    }
    for c in [0.5, 1.0] {
        out.push(entry(
            format!("quartic c={c}"),
            radius,
            move |r| c * (rr - r * r).powi(2),
            move |r| -4.0 * c * r * (rr - r * r),
        ));
    }
    for c in [0.5, 1.0, 1.5] {
        out.push(entry(
            format!("spherical cap c={c}"),
            radius,
            move |r| c * (rr - r * r).max(0.0).sqrt(),
            move |r| -c * r / (rr - r * r).sqrt(),
        ));
    }
    for t in [0.5, 0.8, 1.25, 2.0] {
        out.push(entry(
            format!("bubble scaled t={t}"),
            radius,
            move |r| t * bubble.value(r),
            move |r| t * bubble.derivative(r),
        ));
    }
    for eps in [0.02, 0.05, 0.1] {
        out.push(entry(
            format!("bubble + quartic eps={eps}"),
            radius,
            move |r| bubble.value(r) + eps * (rr - r * r).powi(2) / rr,
            move |r| bubble.derivative(r) - 4.0 * eps * r * (rr - r * r) / rr,
        ));
    }
    let q2 = ctx.qf() - 2.0;
    let sub = RadialProfile::new(ctx, radius, -0.5 * q2 / radius)?;
    out.push(entry(
        "subcritical lambda=-(Q-2)/(2R)".into(),
        radius,
        move |r| sub.value(r),
        move |r| sub.derivative(r),
    ));
    out.push(entry(
        "bubble^0.8".into(),
        radius,
        move |r| bubble.value(r).max(0.0).powf(0.8),
        move |r| {
            let v = bubble.value(r);
            if v <= 0.0 {
                0.0
            } else {
                0.8 * v.powf(-0.2) * bubble.derivative(r)
            }
        },
    ));
    Ok(out)
}

/// Isoperimetric data for one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoEntry {
    pub name: String,
    pub iso_ratio: f64,
    /// `C_Q − iso_ratio`.
    pub gap: f64,
    /// Sup-distance from the critical profile with the same radius.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoSuite {
    pub constant: f64,
    pub bubble_ratio: f64,
    pub entries: Vec<IsoEntry>,
    /// Graphs with `iso_ratio ≥ C_Q`, or with distance above `0.05` and a
    /// gap of at most `1e−4`.
    pub failures: Vec<String>,
}

pub fn sup_distance_radial<A, B>(u: &A, v: &B, samples: usize) -> f64
where
    A: RadialGraph + ?Sized,
    B: RadialGraph + ?Sized,
{
    let radius = u.radius();
    (0..=samples)
        .map(|k| {
            let r = radius * k as f64 / samples as f64;
            (u.value(r) - v.value(r)).abs()
        })
        .fold(0.0, f64::max)
}

pub fn iso_entry<G: RadialGraph + ?Sized>(
    name: &str,
    u: &G,
    ctx: GroupContext,
) -> Result<IsoEntry> {
    let bubble = RadialProfile::critical(ctx, u.radius())?;
    let ratio = iso_ratio(
        volume_radial(u, ctx)?.value,
        h_perimeter_radial(u, ctx)?.value,
        ctx,
    );
    Ok(IsoEntry {
        name: name.to_string(),
        iso_ratio: ratio,
        gap: iso_constant(ctx) - ratio,
        distance: sup_distance_radial(u, &bubble, 4096),
    })
}

pub fn isoperimetric_suite(ctx: GroupContext, radius: f64) -> Result<IsoSuite> {
    let constant = iso_constant(ctx);
    let bubble = RadialProfile::critical(ctx, radius)?;
    let bubble_ratio = iso_entry("bubble", &bubble, ctx)?.iso_ratio;
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for g in isoperimetric_corpus(ctx, radius)? {
        let e = iso_entry(&g.name, &g, ctx)?;
        if !(e.gap > 0.0) || (e.distance > 0.05 && e.gap <= 1e-4) {
            failures.push(e.name.clone());
        }
        entries.push(e);
    }
    Ok(IsoSuite {
        constant,
        bubble_ratio,
        entries,
        failures,
    })
}
