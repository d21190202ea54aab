//! Randomness-frugal sampling.
//!
//! * [`streaming`]: a one-item streaming sampler whose total randomness after
//!   `n` items is `log2(2(n+1)^2/ε)` bits in the worst case, its weighted
//!   generalization, and an offline `ε`-error uniform sampler.
//! * [`baselines`]: classic reservoir sampling and a skip-based reservoir
//!   driven by an exact rational discrete sampler, for bit-cost comparison.
//! * [`alias`]: exact integer-threshold alias tables.
//! * [`succinct`]: compact approximate weighted sampling indices with a
//!   checksummed binary format.
//! * [`verify`]: tape enumeration, exact index audits, chi-square and total
//!   variation checks.
//! * [`cli`]: the `frugal` command-line front end.
//!
//! All randomness comes from a [`BitTape`], which counts every bit consumed.

pub mod alias;
pub mod baselines;
pub mod cli;
pub mod param;
pub mod randbits;
pub mod streaming;
pub mod succinct;
pub mod verify;

use std::fmt;

use serde::Serialize;

pub use param::ErrorParam;
pub use randbits::{BitTape, TapeExhausted};

/// An item index (1-based) or the null outcome `⊥`.
///
/// Also used as the *location* of the live random string inside the
/// streaming samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Outcome {
    Item(u64),
    Bot,
}

impl Outcome {
    pub fn is_bot(&self) -> bool {
        matches!(self, Outcome::Bot)
    }

    pub fn item(&self) -> Option<u64> {
        match *self {
            Outcome::Item(i) => Some(i),
            Outcome::Bot => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Item(i) => write!(f, "{i}"),
            Outcome::Bot => f.write_str("bot"),
        }
    }
}
