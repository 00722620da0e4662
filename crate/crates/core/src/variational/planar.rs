//! Projected Newton–CG descent for `ℱ_λ` over non-radial graphs (`n = 1`).
//!
//! The disk is triangulated on a polar mesh: rings at `r_i = R sin(π i / 2M)`
//! (fine near the rim, where the critical profile behaves like `√(R − r)`)
//! and `N` equally spaced angles, with a fan of triangles around the centre.
//! Every mesh node is an independent unknown, so no symmetry is imposed;
//! the mesh itself is invariant under rotations by `2π/N`. The graph is
//! piecewise linear, `|∇u + z⊥/2|` is integrated with the
//! centroid rule and the volume exactly. The result is resampled onto a
//! Cartesian [`DiskGraph`] by interpolation in `(asin(r/R), θ)`.
//!
//! At `λ = −2/R` adding a constant to `u` costs nothing to first order, so
//! the discrete answer is only as good as the balance between the rim jump
//! and the enclosed area. An inscribed `N`-gon upsets it by
//! `1 − cos(π/N)`, which stays below the rim cell width only for `N ≥ 4M`.
//!
//! Newton steps use CG preconditioned by the rotation-averaged Hessian,
//! inverted mode by mode in angle. Off-centre characteristic points make
//! that average a poor model, so a first pass minimises the energy with
//! `|a|` replaced by `√(|a|² + ε²)`, `ε = R/10`, before the exact pass.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{SolverConfig, SolverReport, StepRule};
use crate::closed_form::{critical_height, half_volume, RadialProfile};
use crate::error::Result;
use crate::functionals::RadialGraph;
use crate::grid::DiskGraph;
use crate::heisenberg::GroupContext;

const NONE: usize = usize::MAX;

/// Lower bound on `|∇u + z⊥/2|` in the Newton model. Near characteristic
/// points the true curvature blows up.
const HESSIAN_FLOOR: f64 = 1e-3;

/// `ε/R` for the smoothed first pass.
const SMOOTHING: f64 = 1e-1;

/// One triangle: `A |Σₖ u_{node k} gₖ + z_c⊥/2|` with `z_c` the centroid.
struct Term {
    nodes: [usize; 3],
    /// `(ring, angle)` of each vertex.
    at: [(usize, usize); 3],
    grads: [[f64; 2]; 3],
    shift: [f64; 2],
    weight: f64,
}

/// Polar triangulation of `B(0, R)`.
pub(crate) struct PolarMesh {
    radius: f64,
    rings: usize,
    angles: usize,
    /// Node positions, centre first, then ring by ring.
    points: Vec<[f64; 2]>,
}

impl PolarMesh {
    pub(crate) fn new(radius: f64, rings: usize, angles: usize) -> Self {
        let mut points = vec![[0.0, 0.0]];
        for i in 1..rings {
            let r = ring_radius(radius, rings, i);
            for j in 0..angles {
                let th = 2.0 * PI * j as f64 / angles as f64;
                points.push([r * th.cos(), r * th.sin()]);
            }
        }
        PolarMesh {
            radius,
            rings,
            angles,
            points,
        }
    }

    fn unknowns(&self) -> usize {
        self.points.len()
    }

    // Node index of (ring, angle); the rim ring is not an unknown.
    fn node(&self, i: usize, j: usize) -> usize {
        if i == 0 {
            0
        } else if i >= self.rings {
            NONE
        } else {
            1 + (i - 1) * self.angles + j % self.angles
        }
    }

    fn position(&self, i: usize, j: usize) -> [f64; 2] {
        let r = ring_radius(self.radius, self.rings, i);
        let th = 2.0 * PI * (j % self.angles) as f64 / self.angles as f64;
        [r * th.cos(), r * th.sin()]
    }

    fn triangles(&self) -> Vec<[(usize, usize); 3]> {
        let mut tris = Vec::with_capacity(2 * self.rings * self.angles);
        for j in 0..self.angles {
            tris.push([(0, 0), (1, j), (1, j + 1)]);
        }
        for i in 1..self.rings {
            for j in 0..self.angles {
                tris.push([(i, j), (i + 1, j), (i + 1, j + 1)]);
                tris.push([(i, j), (i + 1, j + 1), (i, j + 1)]);
            }
        }
        tris
    }

    /// Value at `(x, y)` of the mesh function, bilinear in the ring index
    /// `(2M/π) asin(r/R)` and the angle.
    pub(crate) fn interpolate(&self, u: &[f64], x: f64, y: f64) -> f64 {
        let r = x.hypot(y);
        if r >= self.radius {
            return 0.0;
        }
        let at = |i: usize, j: usize| {
            let k = self.node(i, j);
            if k == NONE {
                0.0
            } else {
                u[k]
            }
        };
        let xi = (r / self.radius).asin() / FRAC_PI_2 * self.rings as f64;
        let i = (xi as usize).min(self.rings - 1);
        let fr = xi - i as f64;
        let th = y.atan2(x).rem_euclid(2.0 * PI) / (2.0 * PI) * self.angles as f64;
        let j = (th as usize).min(self.angles - 1);
        let ft = th - j as f64;
        let inner = at(i, j) * (1.0 - ft) + at(i, j + 1) * ft;
        let outer = at(i + 1, j) * (1.0 - ft) + at(i + 1, j + 1) * ft;
        inner * (1.0 - fr) + outer * fr
    }
}

fn ring_radius(radius: f64, rings: usize, i: usize) -> f64 {
    if i >= rings {
        radius
    } else {
        radius * (FRAC_PI_2 * i as f64 / rings as f64).sin()
    }
}

struct Problem {
    lam: f64,
    rings: usize,
    angles: usize,
    terms: Vec<Term>,
    mass: Vec<f64>,
}

impl Problem {
    fn new(mesh: &PolarMesh, lam: f64) -> Self {
        let mut terms = Vec::new();
        let mut mass = vec![0.0; mesh.unknowns()];
        for tri in mesh.triangles() {
            let p: Vec<[f64; 2]> = tri.iter().map(|&(i, j)| mesh.position(i, j)).collect();
            let nodes = [
                mesh.node(tri[0].0, tri[0].1),
                mesh.node(tri[1].0, tri[1].1),
                mesh.node(tri[2].0, tri[2].1),
            ];
            let twice_area = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
                - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
            let area = 0.5 * twice_area.abs();
            let grads = [
                [
                    (p[1][1] - p[2][1]) / twice_area,
                    (p[2][0] - p[1][0]) / twice_area,
                ],
                [
                    (p[2][1] - p[0][1]) / twice_area,
                    (p[0][0] - p[2][0]) / twice_area,
                ],
                [
                    (p[0][1] - p[1][1]) / twice_area,
                    (p[1][0] - p[0][0]) / twice_area,
                ],
            ];
            for &k in &nodes {
                if k != NONE {
                    mass[k] += area / 3.0;
                }
            }
            let cx = (p[0][0] + p[1][0] + p[2][0]) / 3.0;
            let cy = (p[0][1] + p[1][1] + p[2][1]) / 3.0;
            terms.push(Term {
                nodes,
                at: tri,
                grads,
                shift: [0.5 * cy, -0.5 * cx],
                weight: area,
            });
        }
        Problem {
            lam,
            rings: mesh.rings,
            angles: mesh.angles,
            terms,
            mass,
        }
    }

    #[inline]
    fn field(t: &Term, u: &[f64]) -> [f64; 2] {
        let mut f = t.shift;
        for k in 0..3 {
            if t.nodes[k] != NONE {
                let v = u[t.nodes[k]];
                f[0] += v * t.grads[k][0];
                f[1] += v * t.grads[k][1];
            }
        }
        f
    }

    fn volume(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.mass).map(|(a, b)| a * b).sum()
    }

    fn energy(&self, u: &[f64]) -> f64 {
        self.smoothed_energy(u, 0.0)
    }

    /// The energy with `|a|` replaced by `√(|a|² + ε²)`.
    fn smoothed_energy(&self, u: &[f64], eps: f64) -> f64 {
        let per: f64 = self
            .terms
            .iter()
            .map(|t| {
                let [p, q] = Self::field(t, u);
                t.weight * (p * p + q * q + eps * eps).sqrt()
            })
            .sum();
        per + self.lam * self.volume(u)
    }

    /// Gradient of the smoothed energy, plus per-term `a/ρ` and `1/ρ` for
    /// the Hessian `Σ w Gᵀ (I − nnᵀ)/ρ G`, `ρ = √(|a|² + ε²)`.
    fn linearize(&self, u: &[f64], eps: f64) -> (Vec<f64>, Vec<[f64; 3]>) {
        let mut grad: Vec<f64> = self.mass.iter().map(|m| self.lam * m).collect();
        let mut lin = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let [p, q] = Self::field(t, u);
            let len = (p * p + q * q + eps * eps).sqrt();
            if len < 1e-14 {
                // characteristic: subgradient 0, no curvature
                lin.push([0.0, 0.0, 0.0]);
                continue;
            }
            let (nx, ny) = (p / len, q / len);
            lin.push([nx, ny, 1.0 / len.max(HESSIAN_FLOOR)]);
            for k in 0..3 {
                if t.nodes[k] != NONE {
                    grad[t.nodes[k]] += t.weight * (nx * t.grads[k][0] + ny * t.grads[k][1]);
                }
            }
        }
        (grad, lin)
    }

    fn hessian_diag(&self, lin: &[[f64; 3]]) -> Vec<f64> {
        let mut d = vec![0.0; self.mass.len()];
        for (t, &[nx, ny, inv]) in self.terms.iter().zip(lin) {
            for k in 0..3 {
                if t.nodes[k] == NONE {
                    continue;
                }
                let [gx, gy] = t.grads[k];
                let dot = nx * gx + ny * gy;
                d[t.nodes[k]] += t.weight * (gx * gx + gy * gy - dot * dot) * inv;
            }
        }
        d
    }

    fn hessian_apply(&self, lin: &[[f64; 3]], v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (t, &[nx, ny, inv]) in self.terms.iter().zip(lin) {
            if inv == 0.0 {
                continue;
            }
            let mut g = [0.0, 0.0];
            for k in 0..3 {
                if t.nodes[k] != NONE {
                    let x = v[t.nodes[k]];
                    g[0] += x * t.grads[k][0];
                    g[1] += x * t.grads[k][1];
                }
            }
            let dot = nx * g[0] + ny * g[1];
            let px = t.weight * (g[0] - nx * dot) * inv;
            let py = t.weight * (g[1] - ny * dot) * inv;
            for k in 0..3 {
                if t.nodes[k] != NONE {
                    out[t.nodes[k]] += px * t.grads[k][0] + py * t.grads[k][1];
                }
            }
        }
    }

    /// Preconditioned CG for `(H + μ) p = −g` restricted to `free`, solved
    /// to a relative residual of `min(10⁻², |g|)`.
    fn newton_direction(&self, grad: &[f64], lin: &[[f64; 3]], free: &[bool]) -> Vec<f64> {
        let m = grad.len();
        let diag = self.hessian_diag(lin);
        let shift = 1e-12 * diag.iter().cloned().fold(0.0, f64::max);
        let mask = |v: &mut [f64]| {
            for (x, f) in v.iter_mut().zip(free) {
                if !f {
                    *x = 0.0;
                }
            }
        };
        let precond = RingFourier::new(self, lin, shift);
        // match the local diagonal, which the rotation average smears out
        let scale: Vec<f64> = diag
            .iter()
            .zip(precond.diagonal())
            .map(|(d, p)| (p / (d + shift)).sqrt())
            .collect();
        let apply = |r: &[f64]| -> Vec<f64> {
            let scaled: Vec<f64> = r.iter().zip(&scale).map(|(a, s)| a * s).collect();
            let mut z = precond.apply(&scaled);
            for (v, s) in z.iter_mut().zip(&scale) {
                *v *= s;
            }
            z
        };
        let mut x = vec![0.0; m];
        let mut r: Vec<f64> = grad.iter().map(|g| -g).collect();
        mask(&mut r);
        let r0 = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        if r0 == 0.0 {
            return x;
        }
        let tol = r0.clamp(1e-12, 1e-2) * r0;
        let mut z = apply(&r);
        mask(&mut z);
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut hp = vec![0.0; m];
        for _ in 0..500 {
            self.hessian_apply(lin, &p, &mut hp);
            for k in 0..m {
                hp[k] += shift * p[k];
            }
            mask(&mut hp);
            let php: f64 = p.iter().zip(&hp).map(|(a, b)| a * b).sum();
            if !(php > 0.0) {
                break;
            }
            let alpha = rz / php;
            for k in 0..m {
                x[k] += alpha * p[k];
                r[k] -= alpha * hp[k];
            }
            if r.iter().map(|a| a * a).sum::<f64>().sqrt() <= tol {
                break;
            }
            z = apply(&r);
            mask(&mut z);
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for k in 0..m {
                p[k] = z[k] + beta * p[k];
            }
        }
        if x.iter().all(|v| *v == 0.0) {
            x = apply(&r);
            mask(&mut x);
        }
        x
    }
}

// Stencil offsets (ring, angle) of the triangulation.
const OFFSETS: [(isize, isize); 7] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)];

/// Inverse of the Hessian averaged over rotations by `2π/N`. The average
/// is block circulant, so each angular Fourier mode decouples into a
/// tridiagonal system across the rings.
struct RingFourier {
    angles: usize,
    /// `stencil[i − 1][s]`: mean coefficient of `OFFSETS[s]` on ring `i`.
    stencil: Vec<[f64; 7]>,
    centre: f64,
    /// Mean coupling centre → one ring-1 node, and ring-1 node → centre.
    centre_out: f64,
    centre_in: f64,
    forward: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inverse: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl RingFourier {
    fn new(prob: &Problem, lin: &[[f64; 3]], shift: f64) -> Self {
        let (rings, angles) = (prob.rings, prob.angles);
        let mut stencil = vec![[0.0; 7]; rings - 1];
        let mut centre = shift;
        let (mut centre_out, mut centre_in) = (0.0, 0.0);
        for (t, &[nx, ny, inv]) in prob.terms.iter().zip(lin) {
            if inv == 0.0 {
                continue;
            }
            for a in 0..3 {
                if t.nodes[a] == NONE {
                    continue;
                }
                let (ga, (ia, ja)) = (t.grads[a], t.at[a]);
                let pa = [
                    (ga[0] - nx * (nx * ga[0] + ny * ga[1])) * inv * t.weight,
                    (ga[1] - ny * (nx * ga[0] + ny * ga[1])) * inv * t.weight,
                ];
                for b in 0..3 {
                    if t.nodes[b] == NONE {
                        continue;
                    }
                    let (gb, (ib, jb)) = (t.grads[b], t.at[b]);
                    let c = pa[0] * gb[0] + pa[1] * gb[1];
                    match (ia, ib) {
                        (0, 0) => centre += c,
                        (0, _) => centre_out += c,
                        (_, 0) => centre_in += c,
                        _ => {
                            let di = ib as isize - ia as isize;
                            let mut dj = jb as isize - ja as isize;
                            let n = angles as isize;
                            if dj > 1 {
                                dj -= n;
                            } else if dj < -1 {
                                dj += n;
                            }
                            let s = OFFSETS
                                .iter()
                                .position(|&o| o == (di, dj))
                                .expect("triangles only join neighbouring nodes");
                            stencil[ia - 1][s] += c;
                        }
                    }
                }
            }
        }
        let scale = 1.0 / angles as f64;
        for row in stencil.iter_mut() {
            for c in row.iter_mut() {
                *c *= scale;
            }
            row[0] += shift;
        }
        centre_out *= scale;
        centre_in *= scale;
        let mut planner = rustfft::FftPlanner::new();
        RingFourier {
            angles,
            stencil,
            centre,
            centre_out,
            centre_in,
            forward: planner.plan_fft_forward(angles),
            inverse: planner.plan_fft_inverse(angles),
        }
    }

    /// Diagonal of the averaged operator, node by node.
    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![self.centre];
        for row in &self.stencil {
            d.extend(std::iter::repeat_n(row[0], self.angles));
        }
        d
    }

    fn apply(&self, r: &[f64]) -> Vec<f64> {
        use rustfft::num_complex::Complex64 as C;
        let n = self.angles;
        let rings = self.stencil.len();
        let mut spec: Vec<C> = r[1..].iter().map(|&v| C::new(v, 0.0)).collect();
        for ring in spec.chunks_mut(n) {
            self.forward.process(ring);
        }
        let mut centre_value = 0.0;
        let mut lower = vec![C::new(0.0, 0.0); rings + 1];
        let mut diag = vec![C::new(0.0, 0.0); rings + 1];
        let mut upper = vec![C::new(0.0, 0.0); rings + 1];
        let mut rhs = vec![C::new(0.0, 0.0); rings + 1];
        for k in 0..n {
            let kappa = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let e = C::from_polar(1.0, kappa);
            let ec = e.conj();
            // row 0 is the centre, used only by the mean mode
            for i in 0..rings {
                let s = &self.stencil[i];
                diag[i + 1] = C::new(s[0], 0.0) + e * s[3] + ec * s[4];
                upper[i + 1] = C::new(s[1], 0.0) + e * s[5];
                lower[i + 1] = C::new(s[2], 0.0) + ec * s[6];
                rhs[i + 1] = spec[i * n + k];
            }
            upper[rings] = C::new(0.0, 0.0);
            let first = if k == 0 {
                diag[0] = C::new(self.centre, 0.0);
                upper[0] = C::new(self.centre_out, 0.0);
                lower[1] = C::new(self.centre_in * n as f64, 0.0);
                rhs[0] = C::new(r[0], 0.0);
                0
            } else {
                1
            };
            // Thomas sweep
            for i in first + 1..=rings {
                let w = lower[i] / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] = rhs[i] - w * rhs[i - 1];
            }
            rhs[rings] /= diag[rings];
            for i in (first..rings).rev() {
                rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
            }
            for i in 0..rings {
                spec[i * n + k] = rhs[i + 1];
            }
            if k == 0 {
                centre_value = rhs[0].re;
            }
        }
        let mut out = Vec::with_capacity(r.len());
        out.push(centre_value);
        for ring in spec.chunks_mut(n) {
            self.inverse.process(ring);
            out.extend(ring.iter().map(|c| c.re / n as f64));
        }
        out
    }
}

/// Descent from `u₀ = 0.3 (1 − |z|²/R²)(1 + 0.2 x/R)`, which is not radial.
pub fn solve_2d(cfg: &SolverConfig, radius: f64) -> Result<(DiskGraph, SolverReport)> {
    solve_2d_from(cfg, radius, |x, y| {
        0.3 * (1.0 - (x * x + y * y) / (radius * radius)) * (1.0 + 0.2 * x / radius)
    })
}

/// Runs the descent from `init` and resamples the result onto a
/// `grid_size × grid_size` [`DiskGraph`].
///
/// The polar mesh has `grid_size` rings and `4·grid_size` angles. The
/// report's sup-error trace is measured at the mesh nodes.
pub fn solve_2d_from<F: Fn(f64, f64) -> f64>(
    cfg: &SolverConfig,
    radius: f64,
    init: F,
) -> Result<(DiskGraph, SolverReport)> {
    let (mesh, u, report) = descend(cfg, radius, init)?;
    let grid = DiskGraph::sample(radius, cfg.grid_size, |x, y| {
        mesh.interpolate(&u, x, y).max(0.0)
    })?;
    Ok((grid, report))
}

fn descend<F: Fn(f64, f64) -> f64>(
    cfg: &SolverConfig,
    radius: f64,
    init: F,
) -> Result<(PolarMesh, Vec<f64>, SolverReport)> {
    cfg.validate()?;
    let ctx = GroupContext::new(1)?;
    let lam = cfg.lam.unwrap_or(-2.0 / radius);
    let exact = RadialProfile::new(ctx, radius, lam)?;
    let mesh = PolarMesh::new(radius, cfg.grid_size, 4 * cfg.grid_size);
    let prob = Problem::new(&mesh, lam);
    let reference: Vec<f64> = mesh
        .points
        .iter()
        .map(|p| exact.value(p[0].hypot(p[1])))
        .collect();
    let target_volume = half_volume(radius, ctx);
    let mut u: Vec<f64> = mesh
        .points
        .iter()
        .map(|p| init(p[0], p[1]).max(0.0))
        .collect();
    let sup_error = |u: &[f64]| {
        u.iter()
            .zip(&reference)
            .fold(0.0f64, |e, (a, b)| e.max((a - b).abs()))
    };

    let mut report = SolverReport::new();
    let mut energy = prob.energy(&u);
    report.record(
        energy,
        (prob.volume(&u) - target_volume).abs(),
        sup_error(&u),
    );

    // A smoothed pass settles the characteristic point before the exact one.
    let stages = [
        (SMOOTHING * radius, cfg.tol_energy.max(1e-9)),
        (0.0, cfg.tol_energy),
    ];
    'stages: for (eps, tol) in stages {
        let mut objective = prob.smoothed_energy(&u, eps);
        loop {
            if report.iterations >= cfg.max_iter {
                break 'stages;
            }
            let (grad, lin) = prob.linearize(&u, eps);
            let free: Vec<bool> = u
                .iter()
                .zip(&grad)
                .map(|(v, g)| !(*v <= 0.0 && *g > 0.0))
                .collect();
            let dir = prob.newton_direction(&grad, &lin, &free);
            let trial = |t: f64| -> Vec<f64> {
                u.iter()
                    .zip(&dir)
                    .map(|(a, d)| (a + t * d).max(0.0))
                    .collect()
            };
            let accepted = match cfg.step_rule {
                StepRule::Fixed { step } => {
                    let next = trial(step);
                    let (o, e) = (prob.smoothed_energy(&next, eps), prob.energy(&next));
                    (o <= objective && e <= energy).then_some((next, o, e))
                }
                StepRule::Backtracking { armijo, shrink } => {
                    let mut t = 1.0;
                    let mut found = None;
                    while t > 1e-12 {
                        let next = trial(t);
                        let o = prob.smoothed_energy(&next, eps);
                        let e = prob.energy(&next);
                        let lin_drop: f64 = grad
                            .iter()
                            .zip(next.iter().zip(&u))
                            .map(|(g, (a, b))| g * (a - b))
                            .sum();
                        if o <= objective + armijo * lin_drop && e <= energy {
                            found = Some((next, o, e));
                            break;
                        }
                        t *= shrink;
                    }
                    found
                }
            };
            let Some((next, o, e)) = accepted else {
                if matches!(cfg.step_rule, StepRule::Fixed { .. }) {
                    break 'stages;
                }
                report.converged = eps == 0.0;
                continue 'stages;
            };
            let drop = objective - o;
            u = next;
            objective = o;
            energy = e;
            report.iterations += 1;
            report.record(
                energy,
                (prob.volume(&u) - target_volume).abs(),
                sup_error(&u),
            );
            if drop <= tol * objective.abs().max(1.0) {
                report.converged = eps == 0.0;
                continue 'stages;
            }
        }
    }
    Ok((mesh, u, report))
}

/// Largest spread of `u − u_R(|z|)` over rings `k h ≤ |z| < (k+1) h`, for
/// the critical profile with the grid's radius and centre.
pub fn circular_spread(u: &DiskGraph) -> f64 {
    let h = u.spacing();
    let radius = u.radius();
    let rings = (radius / h).ceil() as usize + 1;
    let mut lo = vec![f64::INFINITY; rings];
    let mut hi = vec![f64::NEG_INFINITY; rings];
    for (i, j) in u.inside_nodes() {
        let [x, y] = u.node_offset(i, j);
        let r = x.hypot(y);
        let k = ((r / h) as usize).min(rings - 1);
        let d = u.value(i, j) - critical_height(radius, r);
        lo[k] = lo[k].min(d);
        hi[k] = hi[k].max(d);
    }
    lo.iter()
        .zip(&hi)
        .filter(|(a, _)| a.is_finite())
        .fold(0.0, |m, (a, b)| m.max(b - a))
}

/// `max |u(z) − u(Jz)|` for the quarter turn `J` about the grid centre.
pub fn c4_asymmetry(u: &DiskGraph) -> f64 {
    let cells = u.cells();
    let mut worst: f64 = 0.0;
    for j in 0..=cells {
        for i in 0..=cells {
            worst = worst.max((u.value(i, j) - u.value(cells - j, i)).abs());
        }
    }
    worst
}
