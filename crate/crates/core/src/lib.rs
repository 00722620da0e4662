//! Numerical toolkit for the isoperimetric problem in the Heisenberg group `ℍⁿ`.
//!
//! The group is `ℝ²ⁿ × ℝ` with the law
//! `(z, t)(z', t') = (z + z', t + t' + ½⟨z', z⊥⟩)` and homogeneous dimension
//! `Q = 2n + 2`. Sets bounded by two graphs `t = ±u(z)` over a ball are
//! compared through their horizontal perimeter and volume; the conjectured
//! minimisers are the bubbles built from [`RadialProfile::critical`].

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod closed_form;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod heisenberg;
pub mod output;
pub mod quadrature;
pub mod reduce;
pub mod variational;

pub use closed_form::{IsoConstants, RadialProfile, RegularityReport};
pub use error::{Error, Result};
pub use grid::DiskGraph;
pub use heisenberg::{GroupContext, HeisenbergPoint};
pub use quadrature::Estimate;
