use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Outcome of a randomized or exhaustive property suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: String,
    /// `None` for deterministic suites.
    pub seed: Option<u64>,
    pub samples: usize,
    pub failures: usize,
    /// Largest violation of the checked bound (0 when none).
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteSummary {
    pub fn new(
        suite: &str,
        seed: Option<u64>,
        samples: usize,
        failures: usize,
        max_violation: f64,
        tolerance: f64,
    ) -> Self {
        SuiteSummary {
            suite: suite.to_string(),
            seed,
            samples,
            failures,
            max_violation,
            tolerance,
            passed: failures == 0,
        }
    }
}

pub(crate) const CHUNK: usize = 4096;

/// Splits `samples` into fixed chunks, each with its own ChaCha stream, so
/// results do not depend on the number of worker threads.
pub(crate) fn chunked<T, F>(seed: u64, samples: usize, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            per_chunk(&mut rng, len)
        })
        .collect()
}
