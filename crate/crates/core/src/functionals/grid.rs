//! Functionals of graphs sampled on a disk grid (`n = 1`).
//!
//! Perimeter and volume integrate the piecewise linear interpolant over a
//! cut-cell triangulation: every cell is split along its diagonal and each
//! triangle is clipped to the disk, the clipping points taking the value
//! stored at the exterior end of their edge (the Dirichlet data, 0 for the
//! competitor class). Profiles with a vertical tangent at the rim then
//! lose none of their final drop. The Euler–Lagrange residual uses
//! centered differences at inside nodes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DiskGraph, MIN_CELLS};
use crate::quadrature::Estimate;
use crate::reduce::pairwise_sum;

/// Default threshold, relative to `R`, below which `|∇u + z⊥/2|` counts as zero.
pub const CHARACTERISTIC_EPS: f64 = 1e-8;

#[inline]
fn centered_gradient(u: &DiskGraph, i: usize, j: usize) -> [f64; 2] {
    let h2 = 2.0 * u.spacing();
    [
        (u.value(i + 1, j) - u.value(i - 1, j)) / h2,
        (u.value(i, j + 1) - u.value(i, j - 1)) / h2,
    ]
}

/// `∇u + z⊥/2` at an inside node, `z⊥ = (y, −x)` in absolute coordinates.
#[inline]
pub fn horizontal_field(u: &DiskGraph, i: usize, j: usize) -> [f64; 2] {
    let [gx, gy] = centered_gradient(u, i, j);
    let [x, y] = u.node_position(i, j);
    [gx + 0.5 * y, gy - 0.5 * x]
}

fn require_resolution(u: &DiskGraph) -> Result<()> {
    if u.cells() < MIN_CELLS {
        return Err(Error::invalid(format!(
            "grid too coarse: {} cells across, need at least {MIN_CELLS}",
            u.cells()
        )));
    }
    Ok(())
}

/// A triangle of the cut-cell mesh. Vertex `a` carries the value of node
/// `nodes[a]`; `bary[a]` is the gradient of its hat function.
pub(crate) struct Piece {
    pub nodes: [usize; 3],
    pub bary: [[f64; 2]; 3],
    pub centroid: [f64; 2],
    pub area: f64,
}

impl Piece {
    fn new(pts: [[f64; 2]; 3], nodes: [usize; 3]) -> Option<Piece> {
        let [p0, p1, p2] = pts;
        let twice = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        let scale = (p1[0] - p0[0]).abs() + (p1[1] - p0[1]).abs();
        if twice.abs() <= 1e-12 * scale * scale {
            return None;
        }
        // ∇λ_a is the inward normal of the opposite edge over 2A
        let grad = |q: [f64; 2], r: [f64; 2]| [(q[1] - r[1]) / twice, (r[0] - q[0]) / twice];
        Some(Piece {
            nodes,
            bary: [grad(p1, p2), grad(p2, p0), grad(p0, p1)],
            centroid: [(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0],
            area: 0.5 * twice.abs(),
        })
    }

    pub fn gradient(&self, values: &[f64]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for a in 0..3 {
            let v = values[self.nodes[a]];
            g[0] += v * self.bary[a][0];
            g[1] += v * self.bary[a][1];
        }
        g
    }

    /// `∇u + z⊥/2` at the centroid.
    pub fn field(&self, values: &[f64]) -> [f64; 2] {
        let [gx, gy] = self.gradient(values);
        [gx + 0.5 * self.centroid[1], gy - 0.5 * self.centroid[0]]
    }

    pub fn mean(&self, values: &[f64]) -> f64 {
        self.nodes.iter().map(|&k| values[k]).sum::<f64>() / 3.0
    }
}

// Pieces of cell (i, j): the two triangles of the cell clipped to the disk.
fn cell_pieces(u: &DiskGraph, i: usize, j: usize, out: &mut Vec<Piece>) {
    out.clear();
    let side = u.nodes_per_side();
    let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
    let [cx, cy] = u.center();
    let rr = u.radius() * u.radius();
    for tri in [[0, 1, 2], [0, 2, 3]] {
        let verts: Vec<(usize, [f64; 2], bool)> = tri
            .iter()
            .map(|&c| {
                let (a, b) = corners[c];
                (b * side + a, u.node_position(a, b), u.is_inside(a, b))
            })
            .collect();
        if verts.iter().all(|v| !v.2) {
            continue;
        }
        let mut poly: Vec<([f64; 2], usize)> = Vec::with_capacity(4);
        for e in 0..3 {
            let (k, p, inside) = verts[e];
            let (kq, q, inside_q) = verts[(e + 1) % 3];
            if inside {
                poly.push((p, k));
            }
            if inside != inside_q {
                let d = [q[0] - p[0], q[1] - p[1]];
                let o = [p[0] - cx, p[1] - cy];
                let a = d[0] * d[0] + d[1] * d[1];
                let b = o[0] * d[0] + o[1] * d[1];
                let c = o[0] * o[0] + o[1] * o[1] - rr;
                let root = (b * b - a * c).max(0.0).sqrt();
                let t = if inside {
                    (-b + root) / a
                } else {
                    (-b - root) / a
                };
                let t = t.clamp(0.0, 1.0);
                let outside = if inside { kq } else { k };
                poly.push(([p[0] + t * d[0], p[1] + t * d[1]], outside));
            }
        }
        for m in 1..poly.len().saturating_sub(1) {
            let (p0, k0) = poly[0];
            let (p1, k1) = poly[m];
            let (p2, k2) = poly[m + 1];
            if let Some(piece) = Piece::new([p0, p1, p2], [k0, k1, k2]) {
                out.push(piece);
            }
        }
    }
}

/// `Σ f(piece)` over the cut-cell mesh, reduced pairwise per cell row.
pub(crate) fn piece_sum<F>(u: &DiskGraph, f: F) -> f64
where
    F: Fn(&Piece) -> f64 + Sync,
{
    let cells = u.cells();
    let rows: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|j| {
            let mut pieces = Vec::with_capacity(4);
            let mut terms = Vec::with_capacity(2 * cells);
            for i in 0..cells {
                cell_pieces(u, i, j, &mut pieces);
                terms.extend(pieces.iter().map(&f));
            }
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&rows)
}

/// `∫ |∇u + z⊥/2|` of the piecewise linear interpolant on the cut-cell mesh.
pub fn h_perimeter_2d(u: &DiskGraph) -> Result<f64> {
    require_resolution(u)?;
    let values = u.values();
    Ok(piece_sum(u, |p| {
        let [a, b] = p.field(values);
        a.hypot(b) * p.area
    }))
}

/// `∫ u` of the piecewise linear interpolant on the cut-cell mesh.
pub fn volume_2d(u: &DiskGraph) -> Result<f64> {
    require_resolution(u)?;
    let values = u.values();
    Ok(piece_sum(u, |p| p.mean(values) * p.area))
}

// Every other node of `u`: same disk, twice the spacing.
fn coarsen(u: &DiskGraph) -> Option<DiskGraph> {
    if !u.cells().is_multiple_of(2) || u.cells() / 2 < MIN_CELLS {
        return None;
    }
    let side = u.nodes_per_side();
    let cells = u.cells() / 2;
    let mut values = Vec::with_capacity((cells + 1) * (cells + 1));
    for j in (0..side).step_by(2) {
        for i in (0..side).step_by(2) {
            values.push(u.value(i, j));
        }
    }
    DiskGraph::from_values(u.center(), u.radius(), cells, values).ok()
}

/// [`h_perimeter_2d`] with an `O(h)` error estimate `|P_h − P_{2h}|`
/// (zero-information estimate `NaN` when the grid cannot be coarsened).
pub fn h_perimeter_2d_estimate(u: &DiskGraph) -> Result<Estimate> {
    let value = h_perimeter_2d(u)?;
    let error = match coarsen(u) {
        Some(c) => (value - h_perimeter_2d(&c)?).abs(),
        None => f64::NAN,
    };
    Ok(Estimate { value, error })
}

/// Inside nodes where `|∇ₕu + z⊥/2| < tol`.
pub fn characteristic_set(u: &DiskGraph, tol: f64) -> Vec<[f64; 2]> {
    u.inside_nodes()
        .filter(|&(i, j)| {
            let [a, b] = horizontal_field(u, i, j);
            a.hypot(b) < tol
        })
        .map(|(i, j)| u.node_position(i, j))
        .collect()
}

/// Per-node residual of `div[(∇u + z⊥/2)/|∇u + z⊥/2|] − λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    pub center: [f64; 2],
    pub radius: f64,
    pub cells: usize,
    /// Row-major node values; `None` where the stencil touches the exterior
    /// ring or a characteristic node.
    pub values: Vec<Option<f64>>,
}

impl ResidualGrid {
    fn offset(&self, k: usize) -> [f64; 2] {
        let side = self.cells + 1;
        let h = 2.0 * self.radius / self.cells as f64;
        [
            -self.radius + (k % side) as f64 * h,
            -self.radius + (k / side) as f64 * h,
        ]
    }

    /// Largest `|residual|` over every evaluated node.
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Largest `|residual|` over evaluated nodes with `a R ≤ |z − c| ≤ b R`.
    pub fn max_abs_in_annulus(&self, inner: f64, outer: f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(k, r)| {
                let [dx, dy] = self.offset(k);
                let rho = dx.hypot(dy) / self.radius;
                match r {
                    Some(v) if rho >= inner && rho <= outer => Some(v.abs()),
                    _ => None,
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn evaluated(&self) -> usize {
        self.values.iter().flatten().count()
    }
}

/// Finite-difference residual of the Euler–Lagrange equation
/// `div[(∇u + z⊥/2)/|∇u + z⊥/2|] = λ`, with characteristic nodes masked at
/// `|∇u + z⊥/2| < 1e−8·R`.
pub fn el_residual_2d(u: &DiskGraph, lam: f64) -> Result<ResidualGrid> {
    el_residual_2d_with_eps(u, lam, CHARACTERISTIC_EPS * u.radius())
}

pub fn el_residual_2d_with_eps(u: &DiskGraph, lam: f64, eps_char: f64) -> Result<ResidualGrid> {
    require_resolution(u)?;
    let side = u.nodes_per_side();
    // unit horizontal normal at inside nodes
    let normals: Vec<Option<[f64; 2]>> = (0..side * side)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % side, k / side);
            if !u.is_inside(i, j) {
                return None;
            }
            let [a, b] = horizontal_field(u, i, j);
            let norm = a.hypot(b);
            (norm >= eps_char).then(|| [a / norm, b / norm])
        })
        .collect();
    let h2 = 2.0 * u.spacing();
    let values = (0..side * side)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % side, k / side);
            if !u.is_inside(i, j) || normals[k].is_none() {
                return None;
            }
            let east = normals[k + 1]?;
            let west = normals[k - 1]?;
            let north = normals[k + side]?;
            let south = normals[k - side]?;
            Some((east[0] - west[0]) / h2 + (north[1] - south[1]) / h2 - lam)
        })
        .collect();
    Ok(ResidualGrid {
        center: u.center(),
        radius: u.radius(),
        cells: u.cells(),
        values,
    })
}

/// Perimeter, volume and isoperimetric data of a graph of the competitor class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub perimeter: f64,
    pub volume: f64,
    pub iso_ratio: f64,
    pub characteristic_points: Vec<Vec<f64>>,
    pub quad_error: f64,
}

/// [`MeasureReport`] of the set bounded by `t = ±u` for a grid graph.
pub fn measure_2d(u: &DiskGraph) -> Result<MeasureReport> {
    u.require_admissible()?;
    let per = h_perimeter_2d_estimate(u)?;
    let vol = volume_2d(u)?;
    let ctx = crate::heisenberg::GroupContext::new(1)?;
    Ok(MeasureReport {
        perimeter: per.value,
        volume: vol,
        iso_ratio: super::radial::iso_ratio(vol, per.value, ctx),
        characteristic_points: characteristic_set(u, CHARACTERISTIC_EPS * u.radius())
            .into_iter()
            .map(|p| p.to_vec())
            .collect(),
        quad_error: per.error,
    })
}
