//! Fixtures shared by the criterion benches.

use hgeo_core::closed_form::critical_height;
use hgeo_core::{DiskGraph, GroupContext, RadialProfile};

pub fn h1() -> GroupContext {
    GroupContext::new(1).expect("n = 1 is valid")
}

/// The unit bubble profile sampled on a `cells × cells` grid.
pub fn bubble_grid(cells: usize) -> DiskGraph {
    DiskGraph::sample(1.0, cells, |x, y| critical_height(1.0, x.hypot(y)).max(0.0))
        .expect("positive radius and cell count")
}

pub fn unit_profile(n: usize) -> RadialProfile {
    RadialProfile::critical(GroupContext::new(n).expect("n >= 1"), 1.0).expect("R = 1 is valid")
}
