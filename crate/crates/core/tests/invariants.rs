use proptest::prelude::*;

use hgeo_core::analysis::{
    convexity_gap, exact_slack_sign_f64, key_inequality_check, rank_one_eigen_check,
};
use hgeo_core::closed_form::{critical_height, half_perimeter, half_volume};
use hgeo_core::functionals::{
    h_perimeter_radial, mean_curvature_radial, volume_radial, Dilated, RadialGraph, Scaled,
};
use hgeo_core::heisenberg::{dilate, group_inv, group_mul, inversion_map};
use hgeo_core::{GroupContext, HeisenbergPoint, RadialProfile};

fn point(n: usize) -> impl Strategy<Value = HeisenbergPoint> {
    (prop::collection::vec(-3.0..3.0f64, 2 * n), -3.0..3.0f64)
        .prop_map(|(z, t)| HeisenbergPoint::new(z, t).unwrap())
}

fn triple() -> impl Strategy<Value = (HeisenbergPoint, HeisenbergPoint, HeisenbergPoint)> {
    (1usize..4).prop_flat_map(|n| (point(n), point(n), point(n)))
}

fn vectors() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|m| {
        (
            prop::collection::vec(-5.0..5.0f64, m)
                .prop_filter("nonzero", |a| a.iter().any(|x| x.abs() > 1e-3)),
            prop::collection::vec(-5.0..5.0f64, m),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_law_is_associative((a, b, c) in triple()) {
        let left = group_mul(&group_mul(&a, &b).unwrap(), &c).unwrap();
        let right = group_mul(&a, &group_mul(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn inverse_cancels((a, _, _) in triple()) {
        let e = group_mul(&a, &group_inv(&a)).unwrap();
        prop_assert!(e.max_abs_diff(&HeisenbergPoint::identity(a.n())) < 1e-14);
    }

    #[test]
    fn dilations_are_automorphisms((a, b, _) in triple(), lam in 0.1..5.0f64) {
        let left = dilate(&group_mul(&a, &b).unwrap(), lam).unwrap();
        let right = group_mul(&dilate(&a, lam).unwrap(), &dilate(&b, lam).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-10 * (1.0 + lam * lam));
    }

    #[test]
    fn inversion_is_an_involutive_automorphism((a, b, _) in triple()) {
        let left = inversion_map(&group_mul(&a, &b).unwrap());
        let right = group_mul(&inversion_map(&a), &inversion_map(&b)).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
        prop_assert_eq!(inversion_map(&inversion_map(&a)), a);
    }

    #[test]
    fn perimeter_and_volume_scale_homogeneously(n in 1usize..4, radius in 0.3..3.0f64, lam in 0.2..4.0f64) {
        let ctx = GroupContext::new(n).unwrap();
        let q = ctx.qf();
        let prof = RadialProfile::critical(ctx, radius).unwrap();
        let d = Dilated::new(&prof, lam).unwrap();
        let p = h_perimeter_radial(&d, ctx).unwrap().value / h_perimeter_radial(&prof, ctx).unwrap().value;
        let v = volume_radial(&d, ctx).unwrap().value / volume_radial(&prof, ctx).unwrap().value;
        prop_assert!((p / lam.powf(q - 1.0) - 1.0).abs() < 1e-8);
        prop_assert!((v / lam.powf(q) - 1.0).abs() < 1e-8);
        prop_assert!((half_volume(lam * radius, ctx) / (lam.powf(q) * half_volume(radius, ctx)) - 1.0).abs() < 1e-12);
        prop_assert!((half_perimeter(lam * radius, ctx) / (lam.powf(q - 1.0) * half_perimeter(radius, ctx)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dilated_bubble_is_the_bubble(radius in 0.3..3.0f64, lam in 0.2..4.0f64, x in 0.0..1.0f64) {
        let ctx = GroupContext::new(1).unwrap();
        let prof = RadialProfile::critical(ctx, radius).unwrap();
        let d = Dilated::new(&prof, lam).unwrap();
        let r = x * lam * radius;
        prop_assert!((d.value(r) - critical_height(lam * radius, r)).abs() < 1e-12 * (lam * radius).powi(2));
    }

    #[test]
    fn volume_is_linear(kappa in 0.0..5.0f64, n in 1usize..4) {
        let ctx = GroupContext::new(n).unwrap();
        let prof = RadialProfile::critical(ctx, 1.0).unwrap();
        let v = volume_radial(&Scaled::new(&prof, kappa), ctx).unwrap().value;
        prop_assert!((v - kappa * half_volume(1.0, ctx)).abs() < 1e-12 * (1.0 + v));
    }

    #[test]
    fn curvature_is_constant(n in 1usize..4, radius in 0.2..5.0f64, frac in 0.01..0.99f64) {
        let ctx = GroupContext::new(n).unwrap();
        let prof = RadialProfile::critical(ctx, radius).unwrap();
        let h = mean_curvature_radial(&prof, frac * prof.s_max(), ctx).unwrap();
        prop_assert!((h * radius / (ctx.qf() - 2.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn convexity_gap_is_nonnegative((alpha, q) in vectors()) {
        let f = convexity_gap(&alpha, &q).unwrap();
        let scale: f64 = alpha.iter().chain(&q).map(|x| x.abs()).fold(1.0, f64::max);
        prop_assert!(f >= -1e-12 * scale.powi(3));
        let k = key_inequality_check(&alpha, &q).unwrap();
        prop_assert_eq!(k.slack, f);
        prop_assert_ne!(exact_slack_sign_f64(&alpha, &q).unwrap(), std::cmp::Ordering::Less);
    }

    #[test]
    fn gap_vanishes_on_the_forward_ray((alpha, _) in vectors(), rho in -1.0..4.0f64) {
        let q: Vec<f64> = alpha.iter().map(|a| rho * a).collect();
        let f = convexity_gap(&alpha, &q).unwrap();
        let n3: f64 = alpha.iter().map(|a| a * a).sum::<f64>().powf(1.5);
        prop_assert!(f.abs() < 1e-12 * n3 * (1.0 + rho * rho));
    }

    #[test]
    fn rank_one_spectrum((alpha, _) in vectors().prop_filter("m >= 2", |(a, _)| a.len() >= 2)) {
        let c = rank_one_eigen_check(&alpha).unwrap();
        prop_assert!(c.max_deviation < 1e-10);
        prop_assert!((c.trace - (alpha.len() - 1) as f64).abs() < 1e-12);
    }
}
