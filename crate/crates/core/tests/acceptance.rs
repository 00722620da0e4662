use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hgeo_core::analysis::{
    characteristic_flow, convexity_gap_suite, eigen_suite, isoperimetric_suite, random_admissible,
    random_midpoint_suite, FlowConfig,
};
use hgeo_core::closed_form::{critical_height, iso_constant, regularity_probe};
use hgeo_core::functionals::{
    el_residual_2d, h_perimeter_2d, h_perimeter_radial, iso_ratio, mean_curvature_radial,
    planar_l2_norm, volume_radial, Dilated, PolarRule, Radial,
};
use hgeo_core::heisenberg::translate_graph;
use hgeo_core::variational::{
    circular_spread, gateaux_derivative, lagrange_search, solve_2d, solve_ode, solve_radial,
    SolverConfig,
};
use hgeo_core::{DiskGraph, GroupContext, HeisenbergPoint, RadialProfile, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240917;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn within_time(out: Result<Outcome>, elapsed: Duration, limit: Duration) -> Result<Outcome> {
    let mut out = out?;
    if elapsed > limit {
        out.passed = false;
        out.detail = format!("{} (took {elapsed:.2?}, limit {limit:?})", out.detail);
    }
    Ok(out)
}

fn h1() -> GroupContext {
    GroupContext::new(1).unwrap()
}

fn closed_form_constants() -> Result<Outcome> {
    let ctx = h1();
    let prof = RadialProfile::critical(ctx, 1.0)?;
    let vol = volume_radial(&prof, ctx)?.value;
    let per = h_perimeter_radial(&prof, ctx)?.value;
    let dv = (vol - 0.925275413).abs();
    let dp = (per - 2.467401100).abs();
    let dc = (iso_ratio(vol, per, ctx) - iso_constant(ctx)).abs();
    outcome(
        dv <= 1e-8 && dp <= 1e-8 && dc <= 1e-6,
        format!("volume {vol:.12}, perimeter {per:.12}, |ratio - C_Q| = {dc:.2e}"),
    )
}

fn constant_curvature() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (q, radius) in [(4usize, 1.0), (4, 2.0), (6, 1.0)] {
        let ctx = GroupContext::from_homogeneous_dimension(q)?;
        let prof = RadialProfile::critical(ctx, radius)?;
        let expected = (q as f64 - 2.0) / radius;
        for k in 0..100 {
            let s = prof.s_max() * (k as f64 + 0.5) / 100.0;
            worst = worst.max((mean_curvature_radial(&prof, s, ctx)? - expected).abs());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max |H - (Q-2)/R| = {worst:.2e} over 300 points"),
    )
}

fn el_residual_convergence() -> Result<Outcome> {
    let mut errs = Vec::new();
    for cells in [128, 256, 512] {
        let u = DiskGraph::sample(1.0, cells, |x, y| critical_height(1.0, x.hypot(y)))?;
        errs.push(el_residual_2d(&u, -2.0)?.max_abs_in_annulus(0.25, 0.75));
    }
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    outcome(
        orders.iter().all(|p| *p >= 0.9),
        format!(
            "annulus residuals {:.3e} {:.3e} {:.3e}, orders {orders:.3?}",
            errs[0], errs[1], errs[2]
        ),
    )
}

fn solver_recovery() -> Result<Outcome> {
    let ctx = h1();
    let start = Instant::now();
    let (_, rep) = solve_radial(&SolverConfig::default(), 1.0, ctx)?;
    let radial_time = start.elapsed();
    let radial_ok = rep.converged
        && rep.sup_error_vs_closed_form < 1e-3
        && rep.iterations <= 10_000
        && radial_time < Duration::from_secs(30);

    let start = Instant::now();
    let cfg = SolverConfig {
        grid_size: 256,
        ..SolverConfig::default()
    };
    let (u, rep2) = solve_2d(&cfg, 1.0)?;
    let planar_time = start.elapsed();
    let spread = circular_spread(&u);
    let sup = u.sup_distance(|x, y| critical_height(1.0, x.hypot(y)));
    let planar_ok = spread < 5e-3 && sup < 5e-3 && planar_time < Duration::from_secs(300);
    outcome(
        radial_ok && planar_ok,
        format!(
            "radial: sup {:.3e} in {} iters, {radial_time:.2?}; 2D: spread {spread:.3e}, sup {sup:.3e}, {} iters, {planar_time:.2?}",
            rep.sup_error_vs_closed_form, rep.iterations, rep2.iterations
        ),
    )
}

fn ode_path() -> Result<Outcome> {
    let ctx = h1();
    let prof = solve_ode(-2.0, 1.0, ctx)?;
    let sup = prof.sup_error_vs_closed_form();
    let target = -2.0 / (2.0 * ctx.n() as f64);
    let f_err = prof
        .reconstructed_f()
        .iter()
        .map(|(_, f)| (f - target).abs())
        .fold(0.0, f64::max);
    outcome(
        sup <= 1e-8 && f_err <= 1e-10,
        format!("sup error {sup:.2e}, max |F - lambda/2n| = {f_err:.2e}"),
    )
}

fn lagrange_closure() -> Result<Outcome> {
    let res = lagrange_search(3.0 * PI * PI / 16.0, h1())?;
    let dr = (res.radius - 1.0).abs();
    let dl = (res.lam + 2.0).abs();
    outcome(
        dr <= 1e-8 && dl <= 1e-8,
        format!("R = {:.12}, lambda = {:.12}", res.radius, res.lam),
    )
}

fn invariance() -> Result<Outcome> {
    let ctx = h1();
    let q = ctx.qf();
    let prof = RadialProfile::critical(ctx, 1.0)?;
    let p1 = h_perimeter_radial(&prof, ctx)?.value;
    let v1 = volume_radial(&prof, ctx)?.value;
    let mut scaling: f64 = 0.0;
    for lam in [0.5, 1.7, 3.0] {
        let d = Dilated::new(&prof, lam)?;
        let p = h_perimeter_radial(&d, ctx)?.value;
        let v = volume_radial(&d, ctx)?.value;
        scaling = scaling
            .max((p / (lam.powf(q - 1.0) * p1) - 1.0).abs())
            .max((v / (lam.powf(q) * v1) - 1.0).abs());
    }
    let u = DiskGraph::sample(1.0, 256, |x, y| critical_height(1.0, x.hypot(y)))?;
    let base = h_perimeter_2d(&u)?;
    let mut translation: f64 = 0.0;
    for (x, y, t) in [(0.3, -0.2, 0.5), (-1.0, 0.7, -2.0), (2.5, 1.5, 0.0)] {
        let g = HeisenbergPoint::from_xy(&[x], &[y], t)?;
        let moved = h_perimeter_2d(&translate_graph(&u, &g)?)?;
        translation = translation.max((moved / base - 1.0).abs());
    }
    outcome(
        scaling <= 1e-8 && translation <= 5e-3,
        format!("scaling rel. error {scaling:.2e}, translation rel. change {translation:.2e}"),
    )
}

fn convexity_suite() -> Result<Outcome> {
    let dims: Vec<usize> = (2..=10).collect();
    let eig = eigen_suite(&dims, 1000, SEED, 1e-10)?;
    let gap2 = convexity_gap_suite(2, 1_000_000, SEED, 1e-12)?;
    let gap4 = convexity_gap_suite(4, 1_000_000, SEED + 1, 1e-12)?;
    let mid = random_midpoint_suite(1.0, 50, -2.0, SEED)?;

    let prof = Radial(RadialProfile::critical(h1(), 1.0)?);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut gateaux: f64 = 0.0;
    for _ in 0..20 {
        let phi = random_admissible(1.0, &mut rng);
        let d = gateaux_derivative(&prof, &phi, -2.0)?;
        gateaux = gateaux.max(d.abs() / planar_l2_norm(&phi, PolarRule::default()));
    }
    let passed = eig.passed
        && gap2.summary.passed
        && gap4.summary.passed
        && gap2.near_ray_failures == 0
        && gap4.near_ray_failures == 0
        && mid.passed
        && gateaux < 1e-5;
    outcome(
        passed,
        format!(
            "eigen dev {:.2e}, gap violation {:.2e}/{:.2e}, midpoint excess {:.2e} over {} pairs, max |dF|/|phi| {gateaux:.2e}",
            eig.max_violation,
            gap2.summary.max_violation,
            gap4.summary.max_violation,
            mid.max_violation,
            mid.samples
        ),
    )
}

fn regularity() -> Result<Outcome> {
    let rep = regularity_probe(h1());
    let d1 = rep.order(1).unwrap();
    let d2 = rep.order(2).unwrap();
    let d3 = rep.order(3).unwrap();
    let low = (d1.left - d1.right).abs().max((d2.left - d2.right).abs());
    // u(x) = π/8 − |x|³/6 + O(x⁵) near 0
    let third = (d3.left - 1.0).abs().max((d3.right + 1.0).abs());
    outcome(
        low <= 1e-6 && third <= 5e-3,
        format!(
            "u''' left {:.6}, right {:.6}; first/second jump {low:.2e}",
            d3.left, d3.right
        ),
    )
}

fn transport_flow() -> Result<Outcome> {
    let mut law: f64 = 0.0;
    let mut limit: f64 = 0.0;
    for rho0 in [-1.0, -0.5, 0.5, 1.0] {
        for z0 in [[0.5, 0.0], [0.3, -0.4], [-0.1, 0.8]] {
            let t = characteristic_flow(z0, rho0, 1.0, &FlowConfig::default())?;
            law = law.max(t.radius_law_error());
            limit = limit.max((t.center_limit() - t.expected_center_limit()).abs());
        }
    }
    outcome(
        law <= 1e-8 && limit <= 1e-6,
        format!("|z|^2 law rel. error {law:.2e}, centre limit error {limit:.2e}"),
    )
}

fn isoperimetric_corpus() -> Result<Outcome> {
    let s = isoperimetric_suite(h1(), 1.0)?;
    let far_gap = s
        .entries
        .iter()
        .filter(|e| e.distance > 0.05)
        .map(|e| e.gap)
        .fold(f64::INFINITY, f64::min);
    let min_gap = s
        .entries
        .iter()
        .map(|e| e.gap)
        .fold(f64::INFINITY, f64::min);
    outcome(
        s.entries.len() >= 20 && s.failures.is_empty(),
        format!(
            "{} graphs, min gap {min_gap:.3e}, min gap at distance > 0.05 {far_gap:.3e}, failures {:?}",
            s.entries.len(),
            s.failures
        ),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Result<Outcome>;
    let criteria: [(&str, Check, u64); 11] = [
        ("closed-form constants", closed_form_constants, 1),
        ("constant curvature", constant_curvature, 1),
        ("EL residual convergence", el_residual_convergence, 60),
        ("solver recovery", solver_recovery, 330),
        ("ODE path", ode_path, 1),
        ("Lagrange closure", lagrange_closure, u64::MAX),
        ("invariance suite", invariance, u64::MAX),
        ("convexity suite", convexity_suite, 60),
        ("regularity probe", regularity, u64::MAX),
        ("transport flow", transport_flow, u64::MAX),
        ("isoperimetric corpus", isoperimetric_corpus, u64::MAX),
    ];
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let line = match within_time(out, elapsed, Duration::from_secs(*limit)) {
            Ok(o) => {
                if !o.passed {
                    failed += 1;
                }
                format!(
                    "{} [{:>2}] {name}: {} ({elapsed:.2?})",
                    if o.passed { "PASS" } else { "FAIL" },
                    k + 1,
                    o.detail
                )
            }
            Err(e) => {
                failed += 1;
                format!("FAIL [{:>2}] {name}: error: {e}", k + 1)
            }
        };
        println!("{line}");
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
