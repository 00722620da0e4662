//! Numerical checks of the lemmas behind uniqueness and the isoperimetric
//! inequality: the rank-one eigenvalue lemma, the convexity gap and the
//! inequality it encodes, midpoint convexity of `ℱ_λ`, the characteristic
//! transport flow, and a corpus of competitors for the isoperimetric ratio.
//!
//! Randomized suites draw from ChaCha8 streams keyed by a seed and a chunk
//! index, so their summaries do not depend on the thread count.

pub mod convexity;
pub mod corpus;
pub mod eigen;
pub mod flow;
pub mod suite;

pub use convexity::{
    convexity_gap, convexity_gap_suite, exact_slack_sign, exact_slack_sign_f64,
    key_inequality_check, key_inequality_suite, midpoint_convexity_suite, random_admissible,
    random_midpoint_suite, GapSuite, KeyInequality,
};
pub use corpus::{
    iso_entry, isoperimetric_corpus, isoperimetric_suite, sup_distance_radial, CorpusGraph,
    IsoEntry, IsoSuite,
};
pub use eigen::{eigen_suite, rank_one_eigen_check, rank_one_matrix, EigenCheck};
pub use flow::{characteristic_flow, rk4_fixed, CurveState, FlowConfig, Trajectory};
pub use suite::SuiteSummary;
