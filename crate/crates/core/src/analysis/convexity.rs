//! The convexity gap `f(q) = |α||q|² − (|q+α| − |α|)⟨q, α⟩ ≥ 0`, the
//! inequality it encodes, and midpoint convexity of `ℱ_λ`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::suite::{chunked, SuiteSummary};
use crate::error::{Error, Result};
use crate::functionals::{planar_energy, BubbleVariation, Combination, PlanarGraph, PolarRule};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn same_length(alpha: &[f64], q: &[f64]) -> Result<()> {
    if alpha.len() != q.len() || alpha.is_empty() {
        return Err(Error::invalid(format!(
            "vectors must have the same positive length ({} vs {})",
            alpha.len(),
            q.len()
        )));
    }
    Ok(())
}

fn gap_unchecked(alpha: &[f64], q: &[f64]) -> f64 {
    let sum: Vec<f64> = q.iter().zip(alpha).map(|(a, b)| a + b).collect();
    let na = norm(alpha);
    na * dot(q, q) - (norm(&sum) - na) * dot(q, alpha)
}

/// `f(q)` for `α ≠ 0`. Zero exactly on the ray `q = ρα`, `ρ ≥ −1`.
pub fn convexity_gap(alpha: &[f64], q: &[f64]) -> Result<f64> {
    same_length(alpha, q)?;
    if alpha.iter().all(|a| *a == 0.0) {
        return Err(Error::invalid("α must be nonzero"));
    }
    Ok(gap_unchecked(alpha, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyInequality {
    pub holds: bool,
    /// `|q|²|α| − (|q+α| − |α|)⟨q, α⟩`.
    pub slack: f64,
}

/// `(|q+α| − |α|)⟨q, α⟩ ≤ |q|²|α|`, accepted down to a slack of `−1e−12`.
pub fn key_inequality_check(alpha: &[f64], q: &[f64]) -> Result<KeyInequality> {
    same_length(alpha, q)?;
    let slack = gap_unchecked(alpha, q);
    Ok(KeyInequality {
        holds: slack >= -1e-12,
        slack,
    })
}

/// Exact sign of the slack for rational data.
///
/// With `a = |α|²`, `b = |q+α|²`, `c = |q|² + ⟨q,α⟩` and `p = ⟨q,α⟩`,
/// the slack is `√a·c − √b·p`; its sign follows from the signs of the two
/// terms and a comparison of `a c²` with `b p²`.
pub fn exact_slack_sign(alpha: &[BigRational], q: &[BigRational]) -> Result<Ordering> {
    if alpha.len() != q.len() || alpha.is_empty() {
        return Err(Error::invalid("vectors must have the same positive length"));
    }
    let rdot = |x: &[BigRational], y: &[BigRational]| {
        x.iter()
            .zip(y)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    };
    let sum: Vec<BigRational> = q.iter().zip(alpha).map(|(a, b)| a + b).collect();
    let a = rdot(alpha, alpha);
    let b = rdot(&sum, &sum);
    let p = rdot(q, alpha);
    let c = rdot(q, q) + &p;
    let sign = |x: &BigRational| {
        if x.is_positive() {
            Ordering::Greater
        } else if x.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    };
    // the two terms √a·c and √b·p
    let left = if a.is_zero() {
        Ordering::Equal
    } else {
        sign(&c)
    };
    let right = if b.is_zero() {
        Ordering::Equal
    } else {
        sign(&p)
    };
    Ok(match (left, right) {
        (Ordering::Equal, r) => r.reverse(),
        (l, Ordering::Equal) => l,
        (Ordering::Greater, Ordering::Less) => Ordering::Greater,
        (Ordering::Less, Ordering::Greater) => Ordering::Less,
        (l, _) => {
            let lhs = &a * &c * &c;
            let rhs = &b * &p * &p;
            let cmp = lhs.cmp(&rhs);
            if l == Ordering::Greater {
                cmp
            } else {
                cmp.reverse()
            }
        }
    })
}

/// [`exact_slack_sign`] for floating-point data, converted exactly.
pub fn exact_slack_sign_f64(alpha: &[f64], q: &[f64]) -> Result<Ordering> {
    let conv = |v: &[f64]| -> Result<Vec<BigRational>> {
        v.iter()
            .map(|x| {
                BigRational::from_f64(*x).ok_or_else(|| Error::invalid("non-finite component"))
            })
            .collect()
    };
    exact_slack_sign(&conv(alpha)?, &conv(q)?)
}

/// Monte Carlo over `α, q ∈ [−1, 1]^dim`, failing on `f(q) < −tol`.
///
/// One sample in ten is placed at relative distance `1e−9` from the ray
/// `q = ρα`; `near_ray_failures` counts those with `ρ ≥ −1` whose gap is
/// not negligible, or with `ρ < −1` whose gap vanishes.
pub fn convexity_gap_suite(dim: usize, samples: usize, seed: u64, tol: f64) -> Result<GapSuite> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let parts = chunked(seed, samples, |rng, len| {
        let mut worst: f64 = 0.0;
        let mut failures = 0;
        let mut near = 0;
        let mut near_failures = 0;
        for k in 0..len {
            let alpha: Vec<f64> = loop {
                let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                if norm(&v) > 1e-3 {
                    break v;
                }
            };
            let on_ray = k % 10 == 0;
            let (q, rho): (Vec<f64>, f64) = if on_ray {
                let rho: f64 = rng.gen_range(-3.0..=3.0);
                let q = alpha
                    .iter()
                    .map(|a| rho * a + 1e-9 * rng.gen_range(-1.0..=1.0))
                    .collect();
                (q, rho)
            } else {
                ((0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect(), 0.0)
            };
            let f = gap_unchecked(&alpha, &q);
            if f < -tol {
                failures += 1;
            }
            worst = worst.max(-f);
            if on_ray {
                near += 1;
                let scale = norm(&alpha).powi(3);
                let small = f.abs() < 1e-6 * scale;
                if (rho >= -1.0 + 1e-6 && !small) || (rho < -1.0 - 1e-3 && small) {
                    near_failures += 1;
                }
            }
        }
        (worst, failures, near, near_failures)
    });
    let (mut worst, mut failures, mut near, mut near_failures) = (0.0f64, 0, 0, 0);
    for (w, f, n, nf) in parts {
        worst = worst.max(w);
        failures += f;
        near += n;
        near_failures += nf;
    }
    Ok(GapSuite {
        summary: SuiteSummary::new(
            &format!("convexity_gap_dim{dim}"),
            Some(seed),
            samples,
            failures + near_failures,
            worst,
            tol,
        ),
        near_ray_samples: near,
        near_ray_failures: near_failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSuite {
    pub summary: SuiteSummary,
    pub near_ray_samples: usize,
    pub near_ray_failures: usize,
}

/// Monte Carlo of the key inequality over `[−10, 10]^dim`, plus an exact
/// check of the slack sign on `exact` random rational pairs.
pub fn key_inequality_suite(
    dim: usize,
    samples: usize,
    exact: usize,
    seed: u64,
) -> Result<SuiteSummary> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let parts = chunked(seed, samples, |rng, len| {
        let mut worst: f64 = 0.0;
        let mut failures = 0;
        for _ in 0..len {
            let alpha: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..=10.0)).collect();
            let q: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..=10.0)).collect();
            let slack = gap_unchecked(&alpha, &q);
            worst = worst.max(-slack);
            if slack < -1e-12 {
                failures += 1;
            }
        }
        (worst, failures)
    });
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for (w, f) in parts {
        worst = worst.max(w);
        failures += f;
    }
    let rationals = chunked(seed ^ 0x5eed, exact, |rng, len| {
        let mut bad = 0;
        for _ in 0..len {
            let mut draw = || {
                let num: i64 = rng.gen_range(-1000..=1000);
                let den: i64 = rng.gen_range(1..=97);
                BigRational::new(BigInt::from(num), BigInt::from(den))
            };
            let alpha: Vec<BigRational> = (0..dim).map(|_| draw()).collect();
            let q: Vec<BigRational> = (0..dim).map(|_| draw()).collect();
            if alpha.iter().all(|a| a.is_zero()) {
                continue;
            }
            if exact_slack_sign(&alpha, &q) == Ok(Ordering::Less) {
                bad += 1;
            }
        }
        bad
    });
    failures += rationals.into_iter().sum::<usize>();
    Ok(SuiteSummary::new(
        &format!("key_inequality_dim{dim}"),
        Some(seed),
        samples + exact,
        failures,
        worst,
        1e-12,
    ))
}

fn midpoint_excess(
    u: &dyn PlanarGraph,
    v: &dyn PlanarGraph,
    lam: f64,
    rule: PolarRule,
) -> Result<f64> {
    let mid = Combination::new(vec![(0.5, u), (0.5, v)])?;
    Ok(planar_energy(&mid, lam, rule)
        - 0.5 * (planar_energy(u, lam, rule) + planar_energy(v, lam, rule)))
}

const MIDPOINT_TOL: f64 = 1e-10;

/// Checks `ℱ_λ[(u+v)/2] ≤ (ℱ_λ[u] + ℱ_λ[v])/2 + 1e−10` for every pair
/// `i ≤ j` of the corpus (`n = 1`, polar quadrature).
pub fn midpoint_convexity_suite(corpus: &[&dyn PlanarGraph], lam: f64) -> Result<SuiteSummary> {
    let Some(first) = corpus.first() else {
        return Err(Error::invalid("empty corpus"));
    };
    let radius = first.radius();
    if corpus
        .iter()
        .any(|g| (g.radius() - radius).abs() > 1e-14 * radius)
    {
        return Err(Error::invalid(
            "graphs in the corpus must share their support disk",
        ));
    }
    let rule = PolarRule::default();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for i in 0..corpus.len() {
        for j in i..corpus.len() {
            let excess = midpoint_excess(corpus[i], corpus[j], lam, rule)?;
            worst = worst.max(excess);
            if excess > MIDPOINT_TOL {
                failures += 1;
            }
            samples += 1;
        }
    }
    Ok(SuiteSummary::new(
        "midpoint_convexity",
        None,
        samples,
        failures,
        worst.max(0.0),
        MIDPOINT_TOL,
    ))
}

/// A random positive graph `(R² − |z|²) P(x, y)` on `B(0, R)`: `P` has
/// constant term in `[0.2, 0.6]` and cubic part with coefficients in
/// `[−0.02, 0.02]` after scaling `x, y` by `R`.
pub fn random_admissible<R: Rng>(radius: f64, rng: &mut R) -> BubbleVariation {
    let mut terms = vec![(0, 0, rng.gen_range(0.2..=0.6))];
    for i in 0..=3u32 {
        for j in 0..=(3 - i) {
            if i + j > 0 {
                let c: f64 = rng.gen_range(-0.02..=0.02);
                terms.push((i, j, c / radius.powi((i + j) as i32)));
            }
        }
    }
    BubbleVariation::new(radius, terms)
}

/// Midpoint convexity over `pairs` independent pairs of
/// [`random_admissible`] graphs.
pub fn random_midpoint_suite(
    radius: f64,
    pairs: usize,
    lam: f64,
    seed: u64,
) -> Result<SuiteSummary> {
    let rule = PolarRule::default();
    let parts = chunked(seed, pairs, |rng, len| {
        (0..len)
            .map(|_| {
                let u = random_admissible(radius, rng);
                let v = random_admissible(radius, rng);
                midpoint_excess(&u, &v, lam, rule)
            })
            .collect::<Vec<_>>()
    });
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for excess in parts.into_iter().flatten() {
        let excess = excess?;
        worst = worst.max(excess);
        if excess > MIDPOINT_TOL {
            failures += 1;
        }
    }
    Ok(SuiteSummary::new(
        "midpoint_convexity_random",
        Some(seed),
        pairs,
        failures,
        worst.max(0.0),
        MIDPOINT_TOL,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::RadialProfile;
    use crate::functionals::Radial;
    use crate::heisenberg::GroupContext;

    fn rat(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|x| BigRational::from_integer(BigInt::from(*x)))
            .collect()
    }

    #[test]
    fn gap_vanishes_on_the_ray() {
        let alpha = [0.6, -1.3, 0.2, 2.0];
        assert_eq!(convexity_gap(&alpha, &[0.0; 4]).unwrap(), 0.0);
        let minus: Vec<f64> = alpha.iter().map(|a| -a).collect();
        assert!(convexity_gap(&alpha, &minus).unwrap().abs() < 1e-14);
        let half: Vec<f64> = alpha.iter().map(|a| -0.5 * a).collect();
        assert!(convexity_gap(&alpha, &half).unwrap().abs() < 1e-12);
        let twice: Vec<f64> = alpha.iter().map(|a| -2.0 * a).collect();
        assert!(convexity_gap(&alpha, &twice).unwrap() > 1.0);
    }

    #[test]
    fn zero_alpha_is_rejected() {
        assert!(convexity_gap(&[0.0, 0.0], &[1.0, 0.0]).is_err());
        assert!(convexity_gap(&[1.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn slack_is_the_gap() {
        let alpha = [1.5, -0.25];
        let q = [-3.0, 7.0];
        let k = key_inequality_check(&alpha, &q).unwrap();
        assert_eq!(k.slack, convexity_gap(&alpha, &q).unwrap());
        assert!(k.holds);
        assert_eq!(
            key_inequality_check(&alpha, &[0.0, 0.0]).unwrap().slack,
            0.0
        );
    }

    #[test]
    fn exact_sign_cases() {
        // q = 0 and q = −α give zero slack
        assert_eq!(
            exact_slack_sign(&rat(&[3, 4]), &rat(&[0, 0])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            exact_slack_sign(&rat(&[3, 4]), &rat(&[-3, -4])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            exact_slack_sign(&rat(&[3, 4]), &rat(&[6, 8])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            exact_slack_sign(&rat(&[3, 4]), &rat(&[-6, -8])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            exact_slack_sign(&rat(&[1, 0]), &rat(&[0, 1])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            exact_slack_sign_f64(&[0.1, 0.2], &[0.3, -0.7]).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn small_suites_pass() {
        let g = convexity_gap_suite(2, 5000, 1, 1e-12).unwrap();
        assert!(g.summary.passed, "{g:?}");
        assert!(g.near_ray_samples >= 500);
        let k = key_inequality_suite(3, 5000, 20, 2).unwrap();
        assert!(k.passed, "{k:?}");
    }

    #[test]
    fn midpoint_pairs() {
        let ctx = GroupContext::new(1).unwrap();
        let prof = Radial(RadialProfile::critical(ctx, 1.0).unwrap());
        let zero = BubbleVariation::new(1.0, vec![]);
        let bump = BubbleVariation::new(1.0, vec![(0, 0, 0.3), (1, 0, 0.05)]);
        let s = midpoint_convexity_suite(&[&prof, &zero, &bump], -2.0).unwrap();
        assert!(s.passed, "{s:?}");
        assert_eq!(s.samples, 6);
        let other = BubbleVariation::new(2.0, vec![]);
        assert!(midpoint_convexity_suite(&[&prof, &other], -2.0).is_err());
    }

    #[test]
    fn random_graphs_are_positive() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_admissible(2.0, &mut rng);
            for k in 0..40 {
                let r = 2.0 * k as f64 / 40.0;
                assert!(g.value([r * 0.6, -r * 0.8]) > 0.0);
            }
        }
        let s = random_midpoint_suite(1.0, 5, -2.0, 11).unwrap();
        assert!(s.passed, "{s:?}");
    }
}
