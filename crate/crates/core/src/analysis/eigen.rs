//! The matrix `A = I − a aᵀ/|a|²` has eigenvalue 0 once and 1 with
//! multiplicity `m − 1`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::suite::{chunked, SuiteSummary};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCheck {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `max |μₖ − expectedₖ|` against `{0, 1, …, 1}`.
    pub max_deviation: f64,
    pub trace: f64,
}

pub fn rank_one_matrix(a: &[f64]) -> Result<DMatrix<f64>> {
    if a.len() < 2 {
        return Err(Error::invalid(format!("need m >= 2, got {}", a.len())));
    }
    let norm2: f64 = a.iter().map(|x| x * x).sum();
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::invalid("the vector must be nonzero and finite"));
    }
    let m = a.len();
    Ok(DMatrix::from_fn(m, m, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - a[i] * a[j] / norm2
    }))
}

pub fn rank_one_eigen_check(a: &[f64]) -> Result<EigenCheck> {
    let mat = rank_one_matrix(a)?;
    let trace = mat.trace();
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(mat)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    let max_deviation = eigenvalues
        .iter()
        .enumerate()
        .map(|(k, mu)| (mu - if k == 0 { 0.0 } else { 1.0 }).abs())
        .fold(0.0, f64::max);
    Ok(EigenCheck {
        eigenvalues,
        max_deviation,
        trace,
    })
}

/// `samples` random vectors with entries in `[−1, 1]` for
/// each `m` in `dims`; fails on any deviation above `tol`.
pub fn eigen_suite(dims: &[usize], samples: usize, seed: u64, tol: f64) -> Result<SuiteSummary> {
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for (k, &m) in dims.iter().enumerate() {
        let chunk_results = chunked(seed.wrapping_add(k as u64), samples, |rng, len| {
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                let a: Vec<f64> = loop {
                    let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    if v.iter().any(|x| *x != 0.0) {
                        break v;
                    }
                };
                out.push(rank_one_eigen_check(&a).map(|c| c.max_deviation));
            }
            out
        });
        for dev in chunk_results.into_iter().flatten() {
            let dev = dev?;
            worst = worst.max(dev);
            if dev > tol {
                failures += 1;
            }
        }
    }
    Ok(SuiteSummary::new(
        "rank_one_eigenvalues",
        Some(seed),
        samples * dims.len(),
        failures,
        worst,
        tol,
    ))
}
