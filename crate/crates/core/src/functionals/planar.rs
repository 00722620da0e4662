//! Analytic graphs over a disk in `ℝ²` and their functionals.
//!
//! Integrals over `B(0, R)` use polar coordinates: composite Gauss–Legendre
//! in `r` with the square-root substitution at the rim, and the trapezoid
//! rule in `θ` (spectrally accurate for smooth periodic integrands).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{composite, gl64, Endpoints};

use super::radial::RadialGraph;

/// A graph `t = u(x, y)` over `B(0, R)` with an available gradient.
pub trait PlanarGraph: Sync {
    fn radius(&self) -> f64;
    fn value(&self, z: [f64; 2]) -> f64;
    fn gradient(&self, z: [f64; 2]) -> [f64; 2];
}

impl<G: PlanarGraph + ?Sized> PlanarGraph for &G {
    fn radius(&self) -> f64 {
        (**self).radius()
    }
    fn value(&self, z: [f64; 2]) -> f64 {
        (**self).value(z)
    }
    fn gradient(&self, z: [f64; 2]) -> [f64; 2] {
        (**self).gradient(z)
    }
}

/// A radial graph viewed in the plane (`n = 1`).
pub struct Radial<G>(pub G);

impl<G: RadialGraph> PlanarGraph for Radial<G> {
    fn radius(&self) -> f64 {
        self.0.radius()
    }
    fn value(&self, z: [f64; 2]) -> f64 {
        let r = z[0].hypot(z[1]);
        if r >= self.0.radius() {
            return 0.0;
        }
        self.0.value(r)
    }
    fn gradient(&self, z: [f64; 2]) -> [f64; 2] {
        let r = z[0].hypot(z[1]);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let d = self.0.derivative(r) / r;
        [d * z[0], d * z[1]]
    }
}

/// `φ(z) = (R² − |z|²) · P(x, y)` with `P(x, y) = Σ c_{ij} xⁱ yʲ`.
///
/// Vanishes on the boundary circle, so it is an admissible variation of
/// any graph positive in the open disk.
#[derive(Debug, Clone, PartialEq)]
pub struct BubbleVariation {
    radius: f64,
    /// `(i, j, c_ij)` monomials.
    terms: Vec<(u32, u32, f64)>,
}

impl BubbleVariation {
    pub fn new(radius: f64, terms: Vec<(u32, u32, f64)>) -> Self {
        BubbleVariation { radius, terms }
    }

    /// Random polynomial of total degree `≤ degree` with coefficients in `[−1, 1]`.
    pub fn random<R: rand::Rng>(radius: f64, degree: u32, rng: &mut R) -> Self {
        let mut terms = Vec::new();
        for i in 0..=degree {
            for j in 0..=(degree - i) {
                terms.push((i, j, rng.gen_range(-1.0..=1.0)));
            }
        }
        BubbleVariation { radius, terms }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        BubbleVariation {
            radius: self.radius,
            terms: self
                .terms
                .iter()
                .map(|&(i, j, c)| (i, j, c * factor))
                .collect(),
        }
    }

    fn poly(&self, z: [f64; 2]) -> (f64, f64, f64) {
        let mut p = 0.0;
        let mut px = 0.0;
        let mut py = 0.0;
        for &(i, j, c) in &self.terms {
            let xi = z[0].powi(i as i32);
            let yj = z[1].powi(j as i32);
            p += c * xi * yj;
            if i > 0 {
                px += c * i as f64 * z[0].powi(i as i32 - 1) * yj;
            }
            if j > 0 {
                py += c * j as f64 * xi * z[1].powi(j as i32 - 1);
            }
        }
        (p, px, py)
    }
}

impl PlanarGraph for BubbleVariation {
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, z: [f64; 2]) -> f64 {
        let w = self.radius * self.radius - z[0] * z[0] - z[1] * z[1];
        w * self.poly(z).0
    }
    fn gradient(&self, z: [f64; 2]) -> [f64; 2] {
        let w = self.radius * self.radius - z[0] * z[0] - z[1] * z[1];
        let (p, px, py) = self.poly(z);
        [w * px - 2.0 * z[0] * p, w * py - 2.0 * z[1] * p]
    }
}

/// `Σ cₖ uₖ` for graphs over the same disk.
pub struct Combination<'a> {
    radius: f64,
    terms: Vec<(f64, &'a dyn PlanarGraph)>,
}

impl<'a> Combination<'a> {
    pub fn new(terms: Vec<(f64, &'a dyn PlanarGraph)>) -> Result<Self> {
        let radius = terms
            .first()
            .map(|t| t.1.radius())
            .ok_or_else(|| Error::invalid("empty combination"))?;
        if terms
            .iter()
            .any(|t| (t.1.radius() - radius).abs() > 1e-14 * radius)
        {
            return Err(Error::invalid(
                "combined graphs must share their support disk",
            ));
        }
        Ok(Combination { radius, terms })
    }
}

impl PlanarGraph for Combination<'_> {
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, z: [f64; 2]) -> f64 {
        self.terms.iter().map(|(c, g)| c * g.value(z)).sum()
    }
    fn gradient(&self, z: [f64; 2]) -> [f64; 2] {
        self.terms.iter().fold([0.0, 0.0], |acc, (c, g)| {
            let d = g.gradient(z);
            [acc[0] + c * d[0], acc[1] + c * d[1]]
        })
    }
}

/// Polar quadrature resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarRule {
    pub radial_panels: usize,
    pub angles: usize,
}

impl Default for PolarRule {
    fn default() -> Self {
        PolarRule {
            radial_panels: 4,
            angles: 128,
        }
    }
}

impl PolarRule {
    /// `∫_{B(0,R)} f(z) dz`.
    pub fn integrate<F: Fn([f64; 2]) -> f64>(&self, radius: f64, f: F) -> f64 {
        let dtheta = 2.0 * PI / self.angles as f64;
        let dirs: Vec<(f64, f64)> = (0..self.angles)
            .map(|k| {
                let th = k as f64 * dtheta;
                (th.cos(), th.sin())
            })
            .collect();
        composite(
            gl64(),
            0.0,
            radius,
            self.radial_panels,
            Endpoints::Right,
            |r| {
                let ring: f64 = dirs.iter().map(|&(c, s)| f([r * c, r * s])).sum();
                ring * dtheta * r
            },
        )
    }
}

#[inline]
fn field<G: PlanarGraph + ?Sized>(u: &G, z: [f64; 2]) -> [f64; 2] {
    let [gx, gy] = u.gradient(z);
    [gx + 0.5 * z[1], gy - 0.5 * z[0]]
}

/// `ℱ[u] = ∫ |∇u + z⊥/2|`.
pub fn planar_perimeter<G: PlanarGraph + ?Sized>(u: &G, rule: PolarRule) -> f64 {
    rule.integrate(u.radius(), |z| {
        let [a, b] = field(u, z);
        a.hypot(b)
    })
}

/// `𝒢[u] = ∫ u`.
pub fn planar_volume<G: PlanarGraph + ?Sized>(u: &G, rule: PolarRule) -> f64 {
    rule.integrate(u.radius(), |z| u.value(z))
}

/// `ℱ_λ[u] = ℱ[u] + λ 𝒢[u]`.
pub fn planar_energy<G: PlanarGraph + ?Sized>(u: &G, lam: f64, rule: PolarRule) -> f64 {
    rule.integrate(u.radius(), |z| {
        let [a, b] = field(u, z);
        a.hypot(b) + lam * u.value(z)
    })
}

/// `‖φ‖_{L²(B)}`.
pub fn planar_l2_norm<G: PlanarGraph + ?Sized>(phi: &G, rule: PolarRule) -> f64 {
    rule.integrate(phi.radius(), |z| phi.value(z).powi(2))
        .sqrt()
}

/// Directional derivative of `ℱ_λ` at `u` along `φ`:
/// `∫ ⟨∇u + z⊥/2, ∇φ⟩ / |∇u + z⊥/2| + λ φ`, with the unit field set to 0
/// where `|∇u + z⊥/2| < eps_char`.
pub fn planar_gateaux<U, P>(u: &U, phi: &P, lam: f64, eps_char: f64, rule: PolarRule) -> f64
where
    U: PlanarGraph + ?Sized,
    P: PlanarGraph + ?Sized,
{
    rule.integrate(u.radius(), |z| {
        let [a, b] = field(u, z);
        let norm = a.hypot(b);
        let [px, py] = phi.gradient(z);
        let flux = if norm < eps_char {
            0.0
        } else {
            (a * px + b * py) / norm
        };
        flux + lam * phi.value(z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::RadialProfile;
    use crate::heisenberg::GroupContext;

    #[test]
    fn profile_functionals_match_closed_form() {
        let ctx = GroupContext::new(1).unwrap();
        let u = Radial(RadialProfile::critical(ctx, 1.0).unwrap());
        let rule = PolarRule::default();
        assert!((planar_perimeter(&u, rule) - PI * PI / 4.0).abs() < 1e-11);
        assert!((planar_volume(&u, rule) - 3.0 * PI * PI / 32.0).abs() < 1e-11);
    }

    #[test]
    fn bubble_gradient_matches_differences() {
        let phi = BubbleVariation::new(1.0, vec![(0, 0, 0.5), (1, 0, -0.3), (1, 2, 0.7)]);
        let z = [0.3, -0.2];
        let h = 1e-6;
        let gx = (phi.value([z[0] + h, z[1]]) - phi.value([z[0] - h, z[1]])) / (2.0 * h);
        let gy = (phi.value([z[0], z[1] + h]) - phi.value([z[0], z[1] - h])) / (2.0 * h);
        let g = phi.gradient(z);
        assert!((g[0] - gx).abs() < 1e-9 && (g[1] - gy).abs() < 1e-9);
        assert!(phi.value([0.6, 0.8]).abs() < 1e-15);
    }

    #[test]
    fn combination_requires_shared_support() {
        let a = BubbleVariation::new(1.0, vec![(0, 0, 1.0)]);
        let b = BubbleVariation::new(2.0, vec![(0, 0, 1.0)]);
        assert!(Combination::new(vec![(1.0, &a), (1.0, &b)]).is_err());
        let c = Combination::new(vec![(2.0, &a), (-1.0, &a)]).unwrap();
        assert!((c.value([0.1, 0.2]) - a.value([0.1, 0.2])).abs() < 1e-15);
    }
}
