use crate::closed_form::RadialProfile;
use crate::error::{Error, Result};
use crate::heisenberg::GroupContext;

/// First and second derivative of a profile `ū(s)`, `s = |z|²/4`.
pub trait ProfileJet {
    fn slope(&self, s: f64) -> f64;
    fn second(&self, s: f64) -> f64;
}

impl ProfileJet for RadialProfile {
    fn slope(&self, s: f64) -> f64 {
        self.slope_unchecked(s)
    }
    fn second(&self, s: f64) -> f64 {
        let b2 = self.beta() * self.beta();
        -b2 / (2.0 * s.sqrt() * (b2 - s).powf(1.5))
    }
}

/// `ū(s) = Σ cₖ sᵏ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialProfile(pub Vec<f64>);

impl ProfileJet for PolynomialProfile {
    fn slope(&self, s: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c * s.powi(k as i32 - 1))
            .sum()
    }
    fn second(&self, s: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(2)
            .map(|(k, c)| (k * (k - 1)) as f64 * c * s.powi(k as i32 - 2))
            .sum()
    }
}

/// Central differences of a sampled height function `ū`.
pub struct FiniteDifferenceJet<F> {
    height: F,
    step: f64,
}

impl<F: Fn(f64) -> f64> FiniteDifferenceJet<F> {
    pub fn new(height: F, step: f64) -> Self {
        FiniteDifferenceJet { height, step }
    }
}

impl<F: Fn(f64) -> f64> ProfileJet for FiniteDifferenceJet<F> {
    fn slope(&self, s: f64) -> f64 {
        let h = self.step;
        ((self.height)(s + h) - (self.height)(s - h)) / (2.0 * h)
    }
    fn second(&self, s: f64) -> f64 {
        let h = self.step;
        ((self.height)(s + h) - 2.0 * (self.height)(s) + (self.height)(s - h)) / (h * h)
    }
}

/// H-mean curvature of the level set `t = ū(|z|²/4)` away from the axis:
///
/// ```text
/// ℋ = −[2s ū'' + (Q − 3) ū' (1 + ū'²)] / [2√s (1 + ū'²)^{3/2}]
/// ```
pub fn mean_curvature_radial<P: ProfileJet + ?Sized>(
    p: &P,
    s: f64,
    ctx: GroupContext,
) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::OutOfDomain {
            what: "s",
            value: s,
            range: "(0, ∞) (points on the t-axis are characteristic)".into(),
        });
    }
    let d1 = p.slope(s);
    let d2 = p.second(s);
    let w = 1.0 + d1 * d1;
    Ok(-(2.0 * s * d2 + (ctx.qf() - 3.0) * d1 * w) / (2.0 * s.sqrt() * w.powf(1.5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_is_flat() {
        let ctx = GroupContext::new(1).unwrap();
        let c = PolynomialProfile(vec![3.0]);
        assert_eq!(mean_curvature_radial(&c, 0.4, ctx).unwrap(), 0.0);
    }

    #[test]
    fn paraboloid() {
        let ctx = GroupContext::new(1).unwrap();
        let p = PolynomialProfile(vec![0.0, 1.0]);
        let h = mean_curvature_radial(&p, 1.0, ctx).unwrap();
        assert!((h + 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn axis_is_rejected() {
        let ctx = GroupContext::new(1).unwrap();
        let p = RadialProfile::critical(ctx, 1.0).unwrap();
        assert!(mean_curvature_radial(&p, 0.0, ctx).is_err());
        assert!(mean_curvature_radial(&p, -0.1, ctx).is_err());
    }

    #[test]
    fn critical_profile_has_constant_curvature() {
        let ctx = GroupContext::new(1).unwrap();
        let p = RadialProfile::critical(ctx, 1.0).unwrap();
        for k in 1..=24 {
            let s = 0.01 * k as f64;
            let h = mean_curvature_radial(&p, s, ctx).unwrap();
            assert!((h - 2.0).abs() < 1e-10, "s = {s}: {h}");
        }
    }

    #[test]
    fn finite_difference_jet_matches_analytic() {
        let ctx = GroupContext::new(1).unwrap();
        let p = RadialProfile::critical(ctx, 1.0).unwrap();
        let fd = FiniteDifferenceJet::new(|s| p.height(s).unwrap(), 1e-5);
        let h = mean_curvature_radial(&fd, 0.1, ctx).unwrap();
        assert!((h - 2.0).abs() < 1e-4, "{h}");
    }
}
