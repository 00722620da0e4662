//! Order-fixed summation.
//!
//! Every grid reduction in the crate goes through [`pairwise_sum`] or
//! [`par_pairwise_sum`]. Both walk the same binary tree (split at the
//! midpoint, sequential leaves of at most [`LEAF`] terms), so the rounded
//! result depends only on the input slice and never on how many worker
//! threads took part.

/// Largest block summed sequentially.
pub const LEAF: usize = 128;

/// Below this length the parallel variant does not fork.
const FORK_THRESHOLD: usize = 1 << 14;

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().fold(0.0, |acc, x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Same tree as [`pairwise_sum`]; subtrees above the fork threshold are
/// evaluated with `rayon::join`.
pub fn par_pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= FORK_THRESHOLD {
        return pairwise_sum(xs);
    }
    let mid = xs.len() / 2;
    let (a, b) = rayon::join(
        || par_pairwise_sum(&xs[..mid]),
        || par_pairwise_sum(&xs[mid..]),
    );
    a + b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_exact_sum_of_integers() {
        let xs: Vec<f64> = (1..=10_000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&xs), 50_005_000.0);
    }

    #[test]
    fn parallel_is_bit_identical_across_pool_sizes() {
        let xs: Vec<f64> = (0..200_003)
            .map(|k| ((k as f64) * 0.618_033_988_75).sin() * 1e-3 + 1.0 / (1.0 + k as f64))
            .collect();
        let reference = pairwise_sum(&xs);
        for threads in [1, 2, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let got = pool.install(|| par_pairwise_sum(&xs));
            assert_eq!(got.to_bits(), reference.to_bits(), "threads = {threads}");
        }
    }

    #[test]
    fn empty_and_single() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(par_pairwise_sum(&[2.5]), 2.5);
    }
}
