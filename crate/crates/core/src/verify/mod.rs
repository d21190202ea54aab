//! Exact and statistical checks for the samplers.
//!
//! The stream oracles run a sampler on every bit string of its (fixed)
//! budget and count outcomes, so the result is the exact distribution.
//! Index distributions are read off the structures directly. Empirical runs
//! are judged by [`chi_square`].

mod audit;
mod enumerate;
mod exact;
pub mod rounds;
mod stats;

pub use audit::{audit_additive, audit_multiplicative, Audit};
pub use enumerate::{
    check_uniform_shares, enumerate_offline, enumerate_tapes, enumerate_uniform,
    enumerate_weighted, exact_index_distribution, group_unit_copies, uniform_stream_bits,
    weighted_stream_bits, TapeEnumeration, MAX_ENUM_BITS,
};
pub use exact::{tv_distance, ExactDistribution};
pub use stats::{chi_square, ChiSquare, DEFAULT_ALPHA};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("enumeration needs 2^{bits} tapes, budget is 2^{max}")]
    BudgetExceeded { bits: u64, max: u64 },
    #[error("masses do not sum to the denominator")]
    NotNormalized,
    #[error("distributions have different outcome spaces")]
    MismatchedSupport,
    #[error("{trials} trials are too few for this distribution")]
    TooFewTrials { trials: u64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
}
