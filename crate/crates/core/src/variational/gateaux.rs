//! Directional derivative of `ℱ_λ`:
//! `δℱ_λ(u; φ) = ∫ ⟨∇u + z⊥/2, ∇φ⟩ / |∇u + z⊥/2| + λ φ`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::functionals::grid::piece_sum;
use crate::functionals::{planar_gateaux, PlanarGraph, PolarRule, CHARACTERISTIC_EPS};
use crate::grid::DiskGraph;

fn require_admissible_planar<U, P>(u: &U, phi: &P) -> Result<()>
where
    U: PlanarGraph + ?Sized,
    P: PlanarGraph + ?Sized,
{
    let radius = u.radius();
    if (phi.radius() - radius).abs() > 1e-14 * radius {
        return Err(Error::invalid(
            "variation and graph live on different disks",
        ));
    }
    let mut interior = Vec::new();
    for a in 1..32 {
        for k in 0..64 {
            let r = radius * a as f64 / 32.0;
            let th = 2.0 * PI * k as f64 / 64.0;
            interior.push([r * th.cos(), r * th.sin()]);
        }
    }
    let scale = interior
        .iter()
        .map(|&z| phi.value(z).abs())
        .fold(radius * radius, f64::max);
    // rounding of |z| at the rim costs √ε for graphs with a vertical tangent
    for k in 0..256 {
        let th = 2.0 * PI * k as f64 / 256.0;
        let v = phi.value([radius * th.cos(), radius * th.sin()]);
        if v.abs() > 1e-7 * scale {
            return Err(Error::invalid(format!(
                "variation does not vanish on the boundary circle (φ = {v:e} at angle {th})"
            )));
        }
    }
    for &z in &interior {
        if u.value(z) <= 0.0 && phi.value(z).abs() > 1e-12 * scale {
            return Err(Error::invalid(format!(
                "variation is supported outside the support of u (at {z:?})"
            )));
        }
    }
    Ok(())
}

/// `δℱ_λ(u; φ)` for analytic graphs on the same disk (`n = 1`), by polar
/// quadrature. Points with `|∇u + z⊥/2| < 1e−8·R` contribute only `λφ`.
pub fn gateaux_derivative<U, P>(u: &U, phi: &P, lam: f64) -> Result<f64>
where
    U: PlanarGraph + ?Sized,
    P: PlanarGraph + ?Sized,
{
    require_admissible_planar(u, phi)?;
    Ok(planar_gateaux(
        u,
        phi,
        lam,
        CHARACTERISTIC_EPS * u.radius(),
        PolarRule::default(),
    ))
}

/// Derivative of the grid functional `h_perimeter_2d + λ volume_2d` at `u`
/// in the direction `φ`; pieces with `|∇u + z⊥/2| < 1e−8·R` contribute only `λφ`.
pub fn gateaux_derivative_grid(u: &DiskGraph, phi: &DiskGraph, lam: f64) -> Result<f64> {
    u.require_same_grid(phi)?;
    let side = u.nodes_per_side();
    for j in 0..side {
        for i in 0..side {
            let p = phi.value(i, j);
            if p == 0.0 {
                continue;
            }
            if !u.is_inside(i, j) {
                return Err(Error::invalid("variation must vanish outside the disk"));
            }
            if u.value(i, j) <= 0.0 {
                return Err(Error::invalid(
                    "variation is supported outside the support of u",
                ));
            }
        }
    }
    let eps = CHARACTERISTIC_EPS * u.radius();
    let (uv, pv) = (u.values(), phi.values());
    Ok(piece_sum(u, |p| {
        let [a, b] = p.field(uv);
        let norm = a.hypot(b);
        let [px, py] = p.gradient(pv);
        let flux = if norm < eps {
            0.0
        } else {
            (a * px + b * py) / norm
        };
        (flux + lam * p.mean(pv)) * p.area
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::RadialProfile;
    use crate::functionals::{
        h_perimeter_2d, planar_energy, planar_l2_norm, volume_2d, BubbleVariation, Combination,
        Radial,
    };
    use crate::heisenberg::GroupContext;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn profile() -> Radial<RadialProfile> {
        Radial(RadialProfile::critical(GroupContext::new(1).unwrap(), 1.0).unwrap())
    }

    #[test]
    fn vanishes_at_the_minimizer() {
        let u = profile();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let phi = BubbleVariation::random(1.0, 3, &mut rng);
            let d = gateaux_derivative(&u, &phi, -2.0).unwrap();
            let norm = planar_l2_norm(&phi, PolarRule::default());
            assert!(d.abs() < 1e-5 * norm, "{d} vs {norm}");
        }
    }

    #[test]
    fn matches_difference_quotient() {
        let u = profile();
        let phi = BubbleVariation::new(1.0, vec![(0, 0, 0.3), (1, 1, 0.5), (2, 0, -0.4)]);
        let rule = PolarRule::default();
        let d = gateaux_derivative(&u, &phi, -1.5).unwrap();
        let e0 = planar_energy(&u, -1.5, rule);
        let mut prev = f64::INFINITY;
        for eps in [1e-3, 1e-4] {
            let moved = Combination::new(vec![(1.0, &u), (eps, &phi)]).unwrap();
            let fd = (planar_energy(&moved, -1.5, rule) - e0) / eps;
            let gap = (fd - d).abs();
            assert!(gap < 10.0 * eps, "eps {eps}: {gap}");
            assert!(gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn rejects_inadmissible_variations() {
        let u = profile();
        let not_zero_on_rim = Radial(crate::functionals::RadialFn::new(1.0, |_| 1.0, |_| 0.0));
        assert!(gateaux_derivative(&u, &not_zero_on_rim, -2.0).is_err());
    }

    #[test]
    fn grid_version_is_the_derivative_of_the_grid_functional() {
        let u = DiskGraph::sample(1.0, 32, |x, y| 0.3 * (1.0 - x * x - y * y)).unwrap();
        let phi = DiskGraph::sample(1.0, 32, |x, y| (1.0 - x * x - y * y) * (0.2 + x * y)).unwrap();
        let d = gateaux_derivative_grid(&u, &phi, -2.0).unwrap();
        let eps = 1e-6;
        let moved = u.combine(1.0, &phi, eps).unwrap();
        let e = |g: &DiskGraph| h_perimeter_2d(g).unwrap() - 2.0 * volume_2d(g).unwrap();
        let fd = (e(&moved) - e(&u)) / eps;
        assert!((fd - d).abs() < 1e-5, "{fd} vs {d}");
        let outside = DiskGraph::sample(1.0, 32, |_, _| 1.0).unwrap();
        assert!(
            gateaux_derivative_grid(&DiskGraph::zero(1.0, 32).unwrap(), &outside, -2.0).is_err()
        );
    }
}
