use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

use hgeo_core::analysis::{characteristic_flow, FlowConfig, Trajectory};
use hgeo_core::closed_form::radius_for_volume;
use hgeo_core::functionals::{
    mean_curvature_radial, measure_2d, measure_radial, MeasureReport, RadialGraph,
};
use hgeo_core::grid::GridHeader;
use hgeo_core::output::{fmt17, write_csv_rows, write_json};
use hgeo_core::variational::{
    lagrange_search, solve_2d, solve_ode, solve_radial, RadialSolution, SolverConfig, SolverReport,
};
use hgeo_core::{DiskGraph, GroupContext, IsoConstants, RadialProfile};

use crate::args::{Format, Mode, Opts};
use crate::Failure;

pub fn context(opts: &Opts) -> Result<GroupContext, Failure> {
    Ok(GroupContext::new(opts.n)?)
}

/// `--R`, else the radius enclosing `--V`, else 1.
pub fn radius(opts: &Opts, ctx: GroupContext) -> Result<f64, Failure> {
    let r = match (opts.radius, opts.volume) {
        (Some(r), _) => r,
        (None, Some(v)) => radius_for_volume(v, ctx)?,
        (None, None) => 1.0,
    };
    if !(r > 0.0) || !r.is_finite() {
        return Err(Failure::Usage(format!(
            "--R must be positive and finite, got {r}"
        )));
    }
    Ok(r)
}

fn samples(opts: &Opts, default: usize) -> Result<usize, Failure> {
    match opts.grid {
        Some(0) => Err(Failure::Usage("--grid must be positive".into())),
        Some(g) => Ok(g),
        None => Ok(default),
    }
}

pub fn sink(opts: &Opts) -> Result<Box<dyn Write>, Failure> {
    Ok(match &opts.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn profile_for(opts: &Opts) -> Result<(GroupContext, RadialProfile), Failure> {
    let ctx = context(opts)?;
    let r = radius(opts, ctx)?;
    let prof = match opts.lam {
        Some(lam) => RadialProfile::new(ctx, r, lam)?,
        None => RadialProfile::critical(ctx, r)?,
    };
    Ok((ctx, prof))
}

fn meta_line(w: &mut dyn Write, ctx: GroupContext, radius: f64, lam: f64) -> io::Result<()> {
    writeln!(
        w,
        "# Q={},R={},lambda={}",
        ctx.q(),
        fmt17(radius),
        fmt17(lam)
    )
}

#[derive(Serialize)]
struct ProfileDoc {
    #[serde(rename = "Q")]
    q: usize,
    #[serde(rename = "R")]
    radius: f64,
    lambda: f64,
    r: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
}

pub fn profile(opts: &Opts) -> Result<(), Failure> {
    let (ctx, prof) = profile_for(opts)?;
    let big_r = prof.radius();
    let m = samples(opts, 200)?;
    let mut doc = ProfileDoc {
        q: ctx.q(),
        radius: big_r,
        lambda: prof.lam(),
        r: Vec::with_capacity(m + 1),
        u: Vec::with_capacity(m + 1),
        du: Vec::with_capacity(m + 1),
    };
    for k in 0..=m {
        let r = if k == m {
            big_r
        } else {
            big_r * k as f64 / m as f64
        };
        let du = if k == m && prof.is_critical() {
            f64::NEG_INFINITY
        } else {
            prof.derivative(r)
        };
        doc.r.push(r);
        doc.u.push(prof.height_at_radius(r)?);
        doc.du.push(du + 0.0);
    }
    let mut w = sink(opts)?;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(&mut w, &doc)?,
        Format::Csv => {
            meta_line(&mut w, ctx, big_r, prof.lam())?;
            let rows: Vec<Vec<f64>> = (0..=m)
                .map(|k| vec![doc.r[k], doc.u[k], doc.du[k]])
                .collect();
            write_csv_rows(&mut w, &["r", "u", "du"], &rows)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MeasureDoc {
    #[serde(rename = "Q")]
    q: usize,
    #[serde(rename = "R")]
    radius: f64,
    lambda: f64,
    radial: MeasureReport,
    grid: Option<MeasureReport>,
}

pub fn measure(opts: &Opts) -> Result<(), Failure> {
    let (ctx, prof) = profile_for(opts)?;
    let grid = match opts.grid {
        None => None,
        Some(cells) => {
            if ctx.n() != 1 {
                return Err(Failure::Usage("--grid measurement needs --n 1".into()));
            }
            let u = DiskGraph::sample(prof.radius(), cells, |x, y| {
                let r = x.hypot(y);
                if r >= prof.radius() {
                    0.0
                } else {
                    prof.value(r)
                }
            })?;
            Some(measure_2d(&u)?)
        }
    };
    let doc = MeasureDoc {
        q: ctx.q(),
        radius: prof.radius(),
        lambda: prof.lam(),
        radial: measure_radial(&prof, ctx)?,
        grid,
    };
    let mut w = sink(opts)?;
    match opts.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&mut w, &doc)?,
        Format::Csv => {
            meta_line(&mut w, ctx, doc.radius, doc.lambda)?;
            let mut rows = vec![vec![
                0.0,
                doc.radial.perimeter,
                doc.radial.volume,
                doc.radial.iso_ratio,
            ]];
            if let Some(g) = &doc.grid {
                rows.push(vec![1.0, g.perimeter, g.volume, g.iso_ratio]);
            }
            write_csv_rows(
                &mut w,
                &["planar", "perimeter", "volume", "iso_ratio"],
                &rows,
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn curvature(opts: &Opts) -> Result<(), Failure> {
    let (ctx, prof) = profile_for(opts)?;
    let m = samples(opts, 100)?;
    let mut rows = Vec::with_capacity(m);
    // interior points only: the s-chart is singular at both ends
    for k in 1..=m {
        let s = prof.s_max() * k as f64 / (m + 1) as f64;
        rows.push(vec![
            (4.0 * s).sqrt(),
            s,
            mean_curvature_radial(&prof, s, ctx)?,
        ]);
    }
    let mut w = sink(opts)?;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(rename = "Q")]
                q: usize,
                #[serde(rename = "R")]
                radius: f64,
                lambda: f64,
                rows: &'a [Vec<f64>],
            }
            let doc = Doc {
                q: ctx.q(),
                radius: prof.radius(),
                lambda: prof.lam(),
                rows: &rows,
            };
            write_json(&mut w, &doc)?;
        }
        Format::Csv => {
            meta_line(&mut w, ctx, prof.radius(), prof.lam())?;
            write_csv_rows(&mut w, &["r", "s", "H"], &rows)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RadialDoc<'a> {
    report: &'a SolverReport,
    solution: &'a RadialSolution,
}

#[derive(Serialize)]
struct PlanarDoc<'a> {
    report: &'a SolverReport,
    header: GridHeader,
    measure: MeasureReport,
}

pub fn solve(opts: &Opts, mode: Mode, max_iter: usize) -> Result<(), Failure> {
    let ctx = context(opts)?;
    let r = radius(opts, ctx)?;
    let mut cfg = SolverConfig {
        lam: opts.lam,
        max_iter,
        ..SolverConfig::default()
    };
    if let Some(g) = opts.grid {
        if g < 64 {
            return Err(Failure::Usage(format!(
                "--grid must be at least 64, got {g}"
            )));
        }
        cfg.grid_size = g;
    } else if mode == Mode::Planar {
        cfg.grid_size = 128;
    }
    if let Some(tol) = opts.tol {
        cfg.tol_energy = tol;
    }
    let mut w = sink(opts)?;
    let report = match mode {
        Mode::Radial => {
            let (sol, rep) = solve_radial(&cfg, r, ctx)?;
            match opts.format.unwrap_or(Format::Csv) {
                Format::Json => write_json(
                    &mut w,
                    &RadialDoc {
                        report: &rep,
                        solution: &sol,
                    },
                )?,
                Format::Csv => {
                    let exact =
                        RadialProfile::new(ctx, r, cfg.lam.unwrap_or(-(ctx.qf() - 2.0) / r))?;
                    meta_line(&mut w, ctx, r, exact.lam())?;
                    let rows: Vec<Vec<f64>> = sol
                        .nodes
                        .iter()
                        .zip(&sol.values)
                        .map(|(&x, &u)| vec![x, u, exact.value(x)])
                        .collect();
                    write_csv_rows(&mut w, &["r", "u", "u_exact"], &rows)?;
                }
            }
            rep
        }
        Mode::Planar => {
            if ctx.n() != 1 {
                return Err(Failure::Usage("--mode planar needs --n 1".into()));
            }
            let (u, rep) = solve_2d(&cfg, r)?;
            match opts.format.unwrap_or(Format::Csv) {
                Format::Json => write_json(
                    &mut w,
                    &PlanarDoc {
                        report: &rep,
                        header: u.header(),
                        measure: measure_2d(&u)?,
                    },
                )?,
                Format::Csv => u.write_csv(&mut w)?,
            }
            rep
        }
    };
    w.flush()?;
    if report.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged(format!(
            "solver stopped after {} iterations without meeting the tolerance",
            report.iterations
        )))
    }
}

pub fn ode(opts: &Opts) -> Result<(), Failure> {
    let ctx = context(opts)?;
    let r = radius(opts, ctx)?;
    let lam = opts.lam.unwrap_or(-(ctx.qf() - 2.0) / r);
    let prof = solve_ode(lam, r, ctx)?;
    let two_n = (2 * ctx.n()) as i32;
    // F = g / r^{2n}; at r = 0 regularity forces F = λ/2n
    let f: Vec<f64> = prof
        .nodes()
        .iter()
        .zip(prof.g_samples())
        .map(|(&x, &g)| {
            if x > 0.0 {
                g / x.powi(two_n)
            } else {
                lam / two_n as f64
            }
        })
        .collect();
    let mut w = sink(opts)?;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(rename = "Q")]
                q: usize,
                #[serde(rename = "R")]
                radius: f64,
                lambda: f64,
                sup_error_vs_closed_form: f64,
                r: &'a [f64],
                u: &'a [f64],
                f: &'a [f64],
            }
            let doc = Doc {
                q: ctx.q(),
                radius: r,
                lambda: lam,
                sup_error_vs_closed_form: prof.sup_error_vs_closed_form(),
                r: prof.nodes(),
                u: prof.heights(),
                f: &f,
            };
            write_json(&mut w, &doc)?;
        }
        Format::Csv => {
            meta_line(&mut w, ctx, r, lam)?;
            let rows: Vec<Vec<f64>> = prof
                .nodes()
                .iter()
                .zip(prof.heights())
                .zip(&f)
                .map(|((&x, &u), &fx)| vec![x, u, fx])
                .collect();
            write_csv_rows(&mut w, &["r", "u", "F"], &rows)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn search(opts: &Opts) -> Result<(), Failure> {
    let ctx = context(opts)?;
    let v = opts
        .volume
        .ok_or_else(|| Failure::Usage("search needs --V".into()))?;
    let res = lagrange_search(v, ctx)?;
    let mut w = sink(opts)?;
    match opts.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&mut w, &res)?,
        Format::Csv => write_csv_rows(
            &mut w,
            &[
                "V",
                "R",
                "lambda",
                "volume",
                "volume_residual",
                "iterations",
            ],
            &[vec![
                v,
                res.radius,
                res.lam,
                res.volume,
                res.volume_residual,
                res.iterations as f64,
            ]],
        )?,
    }
    w.flush()?;
    Ok(())
}

pub fn constants(opts: &Opts) -> Result<(), Failure> {
    let ctx = context(opts)?;
    let c = IsoConstants::new(ctx, radius(opts, ctx)?);
    let mut w = sink(opts)?;
    match opts.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&mut w, &c)?,
        Format::Csv => write_csv_rows(
            &mut w,
            &[
                "Q",
                "R",
                "radius_coefficient",
                "lam",
                "volume_half",
                "perimeter_half",
                "C_Q",
                "h_curv",
            ],
            &[vec![
                c.q as f64,
                c.radius,
                c.radius_coefficient,
                c.lam,
                c.volume_half,
                c.perimeter_half,
                c.c_q,
                c.h_curv,
            ]],
        )?,
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FlowDoc<'a> {
    radius_law_error: f64,
    transport_residual: f64,
    center_limit: f64,
    expected_center_limit: f64,
    trajectory: &'a Trajectory,
}

pub fn flow(opts: &Opts, z0: [f64; 2], rho0: f64) -> Result<(), Failure> {
    if opts.n != 1 {
        return Err(Failure::Usage("flow is defined for --n 1".into()));
    }
    let ctx = context(opts)?;
    let r = radius(opts, ctx)?;
    let mut cfg = FlowConfig::default();
    if let Some(tol) = opts.tol {
        cfg.tol = tol;
    }
    let t = characteristic_flow(z0, rho0, r, &cfg)?;
    let mut w = sink(opts)?;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(
            &mut w,
            &FlowDoc {
                radius_law_error: t.radius_law_error(),
                transport_residual: t.transport_residual(),
                center_limit: t.center_limit(),
                expected_center_limit: t.expected_center_limit(),
                trajectory: &t,
            },
        )?,
        Format::Csv => {
            let rows: Vec<Vec<f64>> = t
                .states
                .iter()
                .map(|st| vec![st.s, st.z[0], st.z[1], st.rho, t.printed_gradient_sq(st)])
                .collect();
            write_csv_rows(&mut w, &["s", "x", "y", "rho", "grad_sq"], &rows)?;
        }
    }
    w.flush()?;
    Ok(())
}
