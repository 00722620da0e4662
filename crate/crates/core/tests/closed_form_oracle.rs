//! Closed-form constants against an independent adaptive Simpson rule.

use std::f64::consts::PI;

use hgeo_core::closed_form::{
    critical_height, half_perimeter, half_volume, iso_constant, iso_ratio_of_bubble,
    radius_for_volume, sphere_measure,
};
use hgeo_core::functionals::{h_perimeter_radial, volume_radial};
use hgeo_core::{GroupContext, IsoConstants, RadialProfile};

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1)
        + simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1)
}

fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let rough = (b - a) / 6.0 * (fa.abs() + 4.0 * fm.abs() + fb.abs());
    simpson(&f, a, b, fa, fm, fb, 1e-13 * rough, 30)
}

// 2π^n / (n−1)!
fn sphere(n: usize) -> f64 {
    2.0 * PI.powi(n as i32) / (1..n).map(|k| k as f64).product::<f64>()
}

// r = R sin θ removes the 1/√(R² − r²) singularity at the rim
fn oracle_volume(n: usize, radius: f64) -> f64 {
    sphere(n)
        * adaptive(
            |th: f64| {
                let r = radius * th.sin();
                critical_height(radius, r) * r.powi(2 * n as i32 - 1) * radius * th.cos()
            },
            0.0,
            PI / 2.0,
        )
}

// √(u'² + r²/4) = rR / (2√(R² − r²))
fn oracle_perimeter(n: usize, radius: f64) -> f64 {
    sphere(n)
        * adaptive(
            |th: f64| {
                let r = radius * th.sin();
                0.5 * r * radius * r.powi(2 * n as i32 - 1)
            },
            0.0,
            PI / 2.0,
        )
}

#[test]
fn sphere_measure_matches_factorial_formula() {
    for n in 1..=5 {
        assert!(
            (sphere_measure(n) / sphere(n) - 1.0).abs() < 1e-14,
            "n = {n}"
        );
    }
}

#[test]
fn heisenberg_one_values() {
    let ctx = GroupContext::new(1).unwrap();
    assert!((half_volume(1.0, ctx) - 3.0 * PI * PI / 32.0).abs() < 1e-14);
    assert!((half_perimeter(1.0, ctx) - PI * PI / 4.0).abs() < 1e-14);
    assert!((half_volume(1.0, ctx) - 0.925275413).abs() < 1e-8);
    assert!((half_perimeter(1.0, ctx) - 2.467401100).abs() < 1e-8);
    assert!(
        (iso_constant(ctx) - 0.32152).abs() < 1e-5,
        "{}",
        iso_constant(ctx)
    );
}

#[test]
fn constants_match_oracle_quadrature() {
    for n in 1..=4 {
        let ctx = GroupContext::new(n).unwrap();
        for radius in [0.5, 1.0, 2.0] {
            let v = oracle_volume(n, radius);
            let p = oracle_perimeter(n, radius);
            assert!(
                (half_volume(radius, ctx) / v - 1.0).abs() < 1e-11,
                "n={n} R={radius}"
            );
            assert!(
                (half_perimeter(radius, ctx) / p - 1.0).abs() < 1e-11,
                "n={n} R={radius}"
            );
        }
    }
}

#[test]
fn module_quadrature_matches_oracle() {
    for n in 1..=3 {
        let ctx = GroupContext::new(n).unwrap();
        let prof = RadialProfile::critical(ctx, 1.3).unwrap();
        let v = volume_radial(&prof, ctx).unwrap().value;
        let p = h_perimeter_radial(&prof, ctx).unwrap().value;
        assert!((v / oracle_volume(n, 1.3) - 1.0).abs() < 1e-10, "n={n}");
        assert!((p / oracle_perimeter(n, 1.3) - 1.0).abs() < 1e-10, "n={n}");
    }
}

#[test]
fn ratio_identity_for_every_radius() {
    for n in 1..=4 {
        let ctx = GroupContext::new(n).unwrap();
        let q = ctx.qf();
        for radius in [0.3, 1.0, 4.0] {
            let direct = (2.0 * oracle_volume(n, radius)).powf((q - 1.0) / q)
                / (2.0 * oracle_perimeter(n, radius));
            assert!((direct / iso_constant(ctx) - 1.0).abs() < 1e-10, "n={n}");
            assert!((iso_ratio_of_bubble(radius, ctx) / iso_constant(ctx) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn radius_of_the_enclosed_volume() {
    let ctx = GroupContext::new(1).unwrap();
    let r = radius_for_volume(3.0 * PI * PI / 16.0, ctx).unwrap();
    assert!((r - 1.0).abs() < 1e-14);
    let r = radius_for_volume(1.8505508, ctx).unwrap();
    assert!((r - 1.0).abs() < 1e-7);
    for n in 1..=3 {
        let ctx = GroupContext::new(n).unwrap();
        for radius in [0.7, 2.2] {
            let v = 2.0 * oracle_volume(n, radius);
            assert!((radius_for_volume(v, ctx).unwrap() / radius - 1.0).abs() < 1e-11);
        }
    }
}

#[test]
fn constants_bundle_is_consistent() {
    let ctx = GroupContext::new(2).unwrap();
    let c = IsoConstants::new(ctx, 1.5);
    assert_eq!(c.q, 6);
    assert!((c.lam + 4.0 / 1.5).abs() < 1e-15);
    assert!((c.h_curv - 4.0 / 1.5).abs() < 1e-15);
    let q = 6.0;
    let ratio = (2.0 * c.volume_half).powf((q - 1.0) / q) / (2.0 * c.perimeter_half);
    assert!((ratio / c.c_q - 1.0).abs() < 1e-12);
}
