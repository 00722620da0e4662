//! Horizontal perimeter `ℱ`, volume `𝒢`, H-mean curvature and related
//! operators for graphs `t = u(z)`.
//!
//! The upper half of a set bounded by `t = ±u(z)` has horizontal
//! perimeter `ℱ[u] = ∫ |∇u + z⊥/2| dz` and volume `𝒢[u] = ∫ u dz`.

pub mod curvature;
pub mod grid;
pub mod planar;
pub mod radial;

pub use curvature::{mean_curvature_radial, FiniteDifferenceJet, PolynomialProfile, ProfileJet};
pub use grid::{
    characteristic_set, el_residual_2d, el_residual_2d_with_eps, h_perimeter_2d,
    h_perimeter_2d_estimate, measure_2d, volume_2d, MeasureReport, ResidualGrid,
    CHARACTERISTIC_EPS,
};
pub use planar::{
    planar_energy, planar_gateaux, planar_l2_norm, planar_perimeter, planar_volume,
    BubbleVariation, Combination, PlanarGraph, PolarRule, Radial,
};
pub use radial::{
    energy_radial, h_perimeter_radial, iso_ratio, volume_radial, Dilated, RadialFn, RadialGraph,
    Scaled,
};

use crate::error::Result;
use crate::heisenberg::GroupContext;

/// [`MeasureReport`] for a radial graph, computed by quadrature.
pub fn measure_radial<G: RadialGraph + ?Sized>(u: &G, ctx: GroupContext) -> Result<MeasureReport> {
    let per = h_perimeter_radial(u, ctx)?;
    let vol = volume_radial(u, ctx)?;
    let mut origin = vec![0.0; 2 * ctx.n()];
    origin.shrink_to_fit();
    // |∇u + z⊥/2|² = u'(r)² + r²/4 vanishes only on the axis
    Ok(MeasureReport {
        perimeter: per.value,
        volume: vol.value,
        iso_ratio: iso_ratio(vol.value, per.value, ctx),
        characteristic_points: vec![origin],
        quad_error: per.error + vol.error,
    })
}
