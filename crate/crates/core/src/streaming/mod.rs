//! Streaming samplers with a worst-case randomness budget.
//!
//! [`StreamSampler`] keeps a uniform sample (up to a `⊥` outcome of
//! probability at most `ε`) of everything seen so far while storing a
//! single payload. After `n` items it has read exactly `log2 s` random bits,
//! with `2^bits < 2(n+1)^2/ε`.
//!
//! All sizes are arbitrary-precision integers and `ε` tests are exact, so
//! the sampling probabilities are exactly `floor(s/t)/s` per item.

mod offline;
mod uniform;
mod weighted;

pub use offline::{offline_uniform, OfflinePlan};
pub use uniform::{Step, StreamSampler, StreamState};
pub use weighted::{WeightedError, WeightedSampler, WeightedStreamState};
