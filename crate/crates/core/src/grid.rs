//! Graphs `t = u(x, y)` sampled on a regular Cartesian grid covering a disk.
//!
//! The grid has `cells` cells per side and `cells + 1` nodes per side,
//! spanning the square `[c − R, c + R]²` around the disk centre `c`.
//! Values are stored for every node; nodes strictly inside the open disk
//! are the "inside" nodes, the rest form the exterior ring where a
//! graph of the competitor class takes the Dirichlet value 0.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest grid accepted by the grid functionals.
pub const MIN_CELLS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct DiskGraph {
    center: [f64; 2],
    radius: f64,
    cells: usize,
    values: Vec<f64>,
}

/// JSON header accompanying the CSV node dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub n: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    pub h: f64,
    pub cells: usize,
    pub center: [f64; 2],
}

impl DiskGraph {
    pub fn from_values(
        center: [f64; 2],
        radius: f64,
        cells: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::OutOfDomain {
                what: "disk radius",
                value: radius,
                range: "(0, ∞)".into(),
            });
        }
        if cells < 2 {
            return Err(Error::invalid(
                "a disk grid needs at least 2 cells per side",
            ));
        }
        let side = cells + 1;
        if values.len() != side * side {
            return Err(Error::invalid(format!(
                "expected {} node values, got {}",
                side * side,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("graph values must be finite"));
        }
        Ok(DiskGraph {
            center,
            radius,
            cells,
            values,
        })
    }

    /// Samples `f(x, y)` on inside nodes of the disk `B(0, R)`; exterior nodes get 0.
    pub fn sample<F: Fn(f64, f64) -> f64>(radius: f64, cells: usize, f: F) -> Result<Self> {
        Self::sample_centered([0.0, 0.0], radius, cells, f)
    }

    pub fn sample_centered<F: Fn(f64, f64) -> f64>(
        center: [f64; 2],
        radius: f64,
        cells: usize,
        f: F,
    ) -> Result<Self> {
        let mut g = Self::from_values(center, radius, cells, vec![0.0; (cells + 1) * (cells + 1)])?;
        let side = g.nodes_per_side();
        for j in 0..side {
            for i in 0..side {
                if g.is_inside(i, j) {
                    let [x, y] = g.node_position(i, j);
                    g.values[j * side + i] = f(x, y);
                }
            }
        }
        if g.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sampled graph values must be finite"));
        }
        Ok(g)
    }

    /// The zero graph on `B(0, R)`.
    pub fn zero(radius: f64, cells: usize) -> Result<Self> {
        Self::sample(radius, cells, |_, _| 0.0)
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn nodes_per_side(&self) -> usize {
        self.cells + 1
    }

    /// Grid spacing `h = 2R / cells`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / self.cells as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nodes_per_side() + i
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.index(i, j)]
    }

    /// Absolute coordinates of node `(i, j)`.
    #[inline]
    pub fn node_position(&self, i: usize, j: usize) -> [f64; 2] {
        let h = self.spacing();
        [
            self.center[0] - self.radius + i as f64 * h,
            self.center[1] - self.radius + j as f64 * h,
        ]
    }

    /// Coordinates of node `(i, j)` relative to the disk centre.
    #[inline]
    pub fn node_offset(&self, i: usize, j: usize) -> [f64; 2] {
        let h = self.spacing();
        [-self.radius + i as f64 * h, -self.radius + j as f64 * h]
    }

    /// Whether node `(i, j)` lies in the open disk.
    #[inline]
    pub fn is_inside(&self, i: usize, j: usize) -> bool {
        let [dx, dy] = self.node_offset(i, j);
        dx * dx + dy * dy < self.radius * self.radius * (1.0 - 1e-12)
    }

    pub fn inside_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let side = self.nodes_per_side();
        (0..side)
            .flat_map(move |j| (0..side).map(move |i| (i, j)))
            .filter(move |&(i, j)| self.is_inside(i, j))
    }

    /// Graph of the competitor class: non-negative inside, zero on the exterior ring.
    pub fn is_admissible(&self) -> bool {
        let side = self.nodes_per_side();
        (0..side).all(|j| {
            (0..side).all(|i| {
                let v = self.value(i, j);
                if self.is_inside(i, j) {
                    v >= 0.0
                } else {
                    v == 0.0
                }
            })
        })
    }

    pub(crate) fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::invalid(
                "graph must be non-negative inside the disk and vanish on the exterior ring",
            ))
        }
    }

    /// Image of the graph under `(x, y, t) ↦ (y, x, −t)`: `w(x, y) = −u(y, x)`.
    pub fn inverted(&self) -> DiskGraph {
        let side = self.nodes_per_side();
        let mut values = vec![0.0; self.values.len()];
        for j in 0..side {
            for i in 0..side {
                values[j * side + i] = -self.value(j, i);
            }
        }
        DiskGraph {
            center: [self.center[1], self.center[0]],
            radius: self.radius,
            cells: self.cells,
            values,
        }
    }

    /// Pointwise `a·self + b·other` on identical grids.
    pub fn combine(&self, a: f64, other: &DiskGraph, b: f64) -> Result<DiskGraph> {
        self.require_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Ok(DiskGraph {
            values,
            ..self.clone()
        })
    }

    pub(crate) fn require_same_grid(&self, other: &DiskGraph) -> Result<()> {
        if self.cells != other.cells || self.radius != other.radius || self.center != other.center {
            return Err(Error::invalid("graphs live on different grids"));
        }
        Ok(())
    }

    /// Maximum over inside nodes of `|u(z) − f(z)|`.
    pub fn sup_distance<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        self.inside_nodes()
            .map(|(i, j)| {
                let [x, y] = self.node_position(i, j);
                (self.value(i, j) - f(x, y)).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn header(&self) -> GridHeader {
        GridHeader {
            n: 1,
            radius: self.radius,
            h: self.spacing(),
            cells: self.cells,
            center: self.center,
        }
    }

    /// Writes every node as `x,y,u` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,y,u")?;
        let side = self.nodes_per_side();
        for j in 0..side {
            for i in 0..side {
                let [x, y] = self.node_position(i, j);
                writeln!(
                    w,
                    "{},{},{}",
                    crate::output::fmt17(x),
                    crate::output::fmt17(y),
                    crate::output::fmt17(self.value(i, j))
                )?;
            }
        }
        Ok(())
    }

    /// Reads a node dump written by [`DiskGraph::write_csv`].
    pub fn read_csv<R: BufRead>(header: &GridHeader, r: R) -> Result<Self> {
        if header.n != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: header.n,
            });
        }
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(l)) if l.trim() == "x,y,u" => {}
            _ => return Err(Error::Parse("missing `x,y,u` header line".into())),
        }
        let mut values = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let u = line
                .split(',')
                .nth(2)
                .ok_or_else(|| Error::Parse(format!("row {} has fewer than 3 columns", k + 2)))?;
            values.push(
                u.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", k + 2)))?,
            );
        }
        Self::from_values(header.center, header.radius, header.cells, values)
    }
}
