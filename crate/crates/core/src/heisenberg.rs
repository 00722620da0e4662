//! Group structure of the Heisenberg group `ℍⁿ = ℝ²ⁿ × ℝ`.
//!
//! Points are stored as `z = (x₁..xₙ, y₁..yₙ)` together with the vertical
//! coordinate `t`. The product is
//!
//! ```text
//! (x, y, t) · (x', y', t') = (x + x', y + y', t + t' + ½(⟨x, y'⟩ − ⟨x', y⟩))
//! ```
//!
//! with identity `(0, 0)`, inverse `(−z, −t)` and the anisotropic
//! dilations `δ_λ(z, t) = (λz, λ²t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::DiskGraph;

/// Dimension data of `ℍⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupContext {
    n: usize,
}

impl GroupContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("the Heisenberg group needs n >= 1"));
        }
        Ok(GroupContext { n })
    }

    /// Context with homogeneous dimension `q`; `q` must be even and at least 4.
    pub fn from_homogeneous_dimension(q: usize) -> Result<Self> {
        if q < 4 || !q.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "homogeneous dimension must be even and >= 4, got {q}"
            )));
        }
        Self::new((q - 2) / 2)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Homogeneous dimension `Q = 2n + 2`.
    pub fn q(&self) -> usize {
        2 * self.n + 2
    }

    pub fn qf(&self) -> f64 {
        self.q() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergPoint {
    z: Vec<f64>,
    t: f64,
}

impl HeisenbergPoint {
    pub fn new(z: Vec<f64>, t: f64) -> Result<Self> {
        if z.is_empty() || !z.len().is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "horizontal part must have even positive length, got {}",
                z.len()
            )));
        }
        Ok(HeisenbergPoint { z, t })
    }

    pub fn from_xy(x: &[f64], y: &[f64], t: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        let mut z = x.to_vec();
        z.extend_from_slice(y);
        Self::new(z, t)
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergPoint {
            z: vec![0.0; 2 * n.max(1)],
            t: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.z.len() / 2
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn x(&self) -> &[f64] {
        &self.z[..self.n()]
    }

    pub fn y(&self) -> &[f64] {
        &self.z[self.n()..]
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn z_perp(&self) -> Vec<f64> {
        z_perp(&self.z)
    }

    pub fn mul(&self, other: &HeisenbergPoint) -> Result<HeisenbergPoint> {
        group_mul(self, other)
    }

    pub fn inverse(&self) -> HeisenbergPoint {
        group_inv(self)
    }

    /// Largest absolute coordinate difference, used for approximate comparisons.
    pub fn max_abs_diff(&self, other: &HeisenbergPoint) -> f64 {
        self.z
            .iter()
            .zip(&other.z)
            .map(|(a, b)| (a - b).abs())
            .fold((self.t - other.t).abs(), f64::max)
    }
}

/// `z⊥ = (y, −x)`.
pub fn z_perp(z: &[f64]) -> Vec<f64> {
    let n = z.len() / 2;
    let mut out = Vec::with_capacity(z.len());
    out.extend_from_slice(&z[n..]);
    out.extend(z[..n].iter().map(|x| -x));
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

pub fn group_mul(a: &HeisenbergPoint, b: &HeisenbergPoint) -> Result<HeisenbergPoint> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let z: Vec<f64> = a.z.iter().zip(&b.z).map(|(p, q)| p + q).collect();
    let twist = 0.5 * (dot(a.x(), b.y()) - dot(b.x(), a.y()));
    Ok(HeisenbergPoint {
        z,
        t: a.t + b.t + twist,
    })
}

pub fn group_inv(g: &HeisenbergPoint) -> HeisenbergPoint {
    HeisenbergPoint {
        z: g.z.iter().map(|v| -v).collect(),
        t: -g.t,
    }
}

/// `δ_λ(z, t) = (λz, λ²t)`.
pub fn dilate(g: &HeisenbergPoint, lam: f64) -> Result<HeisenbergPoint> {
    if !(lam > 0.0) || !lam.is_finite() {
        return Err(Error::OutOfDomain {
            what: "dilation factor",
            value: lam,
            range: "(0, ∞)".into(),
        });
    }
    Ok(HeisenbergPoint {
        z: g.z.iter().map(|v| lam * v).collect(),
        t: lam * lam * g.t,
    })
}

/// The involution `(x, y, t) ↦ (y, x, −t)`.
pub fn inversion_map(g: &HeisenbergPoint) -> HeisenbergPoint {
    let n = g.n();
    let mut z = Vec::with_capacity(2 * n);
    z.extend_from_slice(g.y());
    z.extend_from_slice(g.x());
    HeisenbergPoint { z, t: -g.t }
}

/// Left translation of the graph `t = u(z)` by `g₀ ∈ ℍ¹`.
///
/// The image is again a graph, over the disk centred at `z₀`, given by
/// `v(z') = t₀ + u(z' − z₀) + ½(⟨x₀, y' − y₀⟩ − ⟨x' − x₀, y₀⟩)`. The new
/// grid is the old one shifted by `z₀`, so no interpolation is involved.
pub fn translate_graph(u: &DiskGraph, g0: &HeisenbergPoint) -> Result<DiskGraph> {
    if g0.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: g0.n(),
        });
    }
    let (x0, y0, t0) = (g0.x()[0], g0.y()[0], g0.t());
    let [cx, cy] = u.center();
    let shifted_center = [cx + x0, cy + y0];
    let side = u.nodes_per_side();
    let mut values = Vec::with_capacity(u.values().len());
    for j in 0..side {
        for i in 0..side {
            let [xp, yp] = u.node_position(i, j);
            // position of the same node on the translated grid
            let (xn, yn) = (xp + x0, yp + y0);
            let twist = 0.5 * (x0 * (yn - y0) - (xn - x0) * y0);
            values.push(t0 + u.value(i, j) + twist);
        }
    }
    DiskGraph::from_values(shifted_center, u.radius(), u.cells(), values)
}
