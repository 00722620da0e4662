use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hgeo_core::analysis::{
    convexity_gap_suite, eigen_suite, key_inequality_suite, random_admissible,
    random_midpoint_suite, SuiteSummary,
};
use hgeo_core::closed_form::regularity_probe;
use hgeo_core::functionals::{
    h_perimeter_radial, iso_ratio, mean_curvature_radial, planar_l2_norm, volume_radial, Dilated,
    PolarRule, Radial,
};
use hgeo_core::output::write_json;
use hgeo_core::variational::gateaux_derivative;
use hgeo_core::{GroupContext, RadialProfile};

use crate::args::Opts;
use crate::commands::sink;
use crate::Failure;

// Reference values for ℍ¹ with R = 1: half volume, half perimeter and C_4.
const REFERENCE: [(&str, f64); 3] = [
    ("volume_half", 0.925_275_412_602_127_4),
    ("perimeter_half", 2.467_401_100_272_339_7),
    ("c_q", 0.321_518_534_289_371_9),
];

#[derive(Serialize)]
struct Report {
    seed: u64,
    passed: bool,
    failing: Vec<String>,
    suites: Vec<SuiteSummary>,
}

fn h(n: usize) -> GroupContext {
    GroupContext::new(n).expect("n >= 1")
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn scaling_suite() -> Result<SuiteSummary, Failure> {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for n in 1..=3 {
        let ctx = h(n);
        let q = ctx.qf();
        for radius in [0.5, 2.0] {
            let prof = RadialProfile::critical(ctx, radius)?;
            let p0 = h_perimeter_radial(&prof, ctx)?.value;
            let v0 = volume_radial(&prof, ctx)?.value;
            for lam in [0.5, 3.0] {
                let d = Dilated::new(&prof, lam)?;
                let p = h_perimeter_radial(&d, ctx)?.value;
                let v = volume_radial(&d, ctx)?.value;
                worst = worst
                    .max(rel(p, lam.powf(q - 1.0) * p0))
                    .max(rel(v, lam.powf(q) * v0));
                samples += 1;
            }
        }
    }
    let tol = 1e-8;
    Ok(SuiteSummary::new(
        "scaling",
        None,
        samples,
        (worst > tol) as usize,
        worst,
        tol,
    ))
}

fn gateaux_suite(seed: u64) -> Result<SuiteSummary, Failure> {
    let prof = Radial(RadialProfile::critical(h(1), 1.0)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = 1e-5;
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..20 {
        let phi = random_admissible(1.0, &mut rng);
        let d = gateaux_derivative(&prof, &phi, -2.0)?;
        let ratio = d.abs() / planar_l2_norm(&phi, PolarRule::default());
        worst = worst.max(ratio);
        failures += (ratio >= tol) as usize;
    }
    Ok(SuiteSummary::new(
        "gateaux",
        Some(seed),
        20,
        failures,
        worst,
        tol,
    ))
}

fn curvature_suite() -> Result<SuiteSummary, Failure> {
    let tol = 1e-10;
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for n in 1..=3 {
        let ctx = h(n);
        for radius in [0.5, 1.0, 3.0] {
            let prof = RadialProfile::critical(ctx, radius)?;
            let expected = (ctx.qf() - 2.0) / radius;
            for k in 1..100 {
                let s = prof.s_max() * k as f64 / 100.0;
                worst = worst.max(rel(mean_curvature_radial(&prof, s, ctx)?, expected));
                samples += 1;
            }
        }
    }
    Ok(SuiteSummary::new(
        "curvature_constancy",
        None,
        samples,
        (worst > tol) as usize,
        worst,
        tol,
    ))
}

fn regularity_suite() -> SuiteSummary {
    let rep = regularity_probe(h(1));
    let jump = |k| {
        let l = rep.order(k).expect("orders 1 to 3 are probed");
        (l.left - l.right).abs()
    };
    let d3 = rep.order(3).expect("orders 1 to 3 are probed");
    // C² across the centre; the third derivative jumps from 1 to −1
    let low = jump(1).max(jump(2));
    let third = (d3.left - 1.0).abs().max((d3.right + 1.0).abs());
    let failures = (low > 1e-6) as usize + (third > 5e-3) as usize;
    SuiteSummary::new("regularity", None, 2, failures, low.max(third), 5e-3)
}

fn reference_suite(perturb: f64) -> Result<SuiteSummary, Failure> {
    let ctx = h(1);
    let prof = RadialProfile::critical(ctx, 1.0)?;
    let v = volume_radial(&prof, ctx)?.value;
    let p = h_perimeter_radial(&prof, ctx)?.value;
    let computed = [v, p, iso_ratio(v, p, ctx)];
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    for ((_, stored), value) in REFERENCE.iter().zip(computed) {
        worst = worst.max(rel(value, stored * (1.0 + perturb)));
    }
    Ok(SuiteSummary::new(
        "reference_constants",
        None,
        REFERENCE.len(),
        (worst > tol) as usize,
        worst,
        tol,
    ))
}

pub fn run(opts: &Opts, perturb: Option<f64>) -> Result<(), Failure> {
    let seed = opts.seed;
    let dims: Vec<usize> = (2..=10).collect();
    let mut suites = vec![eigen_suite(&dims, 1000, seed, 1e-10)?];
    for (k, dim) in [2usize, 4].into_iter().enumerate() {
        let g = convexity_gap_suite(dim, 200_000, seed.wrapping_add(k as u64), 1e-12)?;
        let mut ray = g.summary.clone();
        ray.suite = format!("{}_near_ray", g.summary.suite);
        ray.samples = g.near_ray_samples;
        ray.failures = g.near_ray_failures;
        ray.passed = g.near_ray_failures == 0;
        suites.push(g.summary);
        suites.push(ray);
    }
    suites.push(key_inequality_suite(2, 100_000, 200, seed)?);
    suites.push(random_midpoint_suite(1.0, 20, -2.0, seed)?);
    suites.push(scaling_suite()?);
    suites.push(gateaux_suite(seed)?);
    suites.push(curvature_suite()?);
    suites.push(regularity_suite());
    suites.push(reference_suite(perturb.unwrap_or(0.0))?);

    let failing: Vec<String> = suites
        .iter()
        .filter(|s| !s.passed)
        .map(|s| s.suite.clone())
        .collect();
    let report = Report {
        seed,
        passed: failing.is_empty(),
        failing: failing.clone(),
        suites,
    };
    let mut w = sink(opts)?;
    write_json(&mut w, &report)?;
    w.flush()?;
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Suite(format!(
            "failing invariants: {}",
            failing.join(", ")
        )))
    }
}
