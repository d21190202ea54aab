//! Compact approximate weighted sampling.
//!
//! [`MultIndex`] keeps each weight's leading one and `ceil(log2(2/ε))`
//! further bits, so every item's probability is within a factor `1 ± ε` of
//! its target. [`AdditiveTable`] spends `1/ε` slots and lands within `±ε`.
//! Both serialize to the [`format`] described there.

mod additive;
pub mod format;
mod mult;
mod truncate;

pub use additive::AdditiveTable;
pub use format::FormatError;
pub use mult::{min_width, MultIndex};
pub use truncate::{f_width, kept_bits, truncate, TruncatedWeight};

use thiserror::Error;

use crate::alias::AliasError;
use crate::{BitTape, ErrorParam, TapeExhausted};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuccinctError {
    #[error("ε = {0} is not a power of 1/2")]
    NotPowerOfHalf(ErrorParam),
    #[error("1/ε is not an integer for ε = {0}")]
    NonIntegerInverseEps(ErrorParam),
    #[error("weight {value} does not fit in {w} bits")]
    WeightTooWide { value: u64, w: u32 },
    #[error("bit width {0} outside 1..=64")]
    BadWidth(u32),
    #[error(transparent)]
    Alias(#[from] AliasError),
    #[error("{0}")]
    Corrupt(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Mult,
    Add,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Mult => "mult",
            Mode::Add => "add",
        }
    }
}

/// Either kind of index, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuccinctIndex {
    Mult(MultIndex),
    Add(AdditiveTable),
}

impl SuccinctIndex {
    pub fn build(
        mode: Mode,
        xs: &[u64],
        eps: ErrorParam,
        w: Option<u32>,
    ) -> Result<Self, SuccinctError> {
        match mode {
            Mode::Mult => {
                let w = w.unwrap_or_else(|| min_width(xs));
                MultIndex::build(xs, eps, w).map(SuccinctIndex::Mult)
            }
            Mode::Add => AdditiveTable::build(xs, eps).map(SuccinctIndex::Add),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            SuccinctIndex::Mult(_) => Mode::Mult,
            SuccinctIndex::Add(_) => Mode::Add,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SuccinctIndex::Mult(i) => i.len(),
            SuccinctIndex::Add(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn eps(&self) -> ErrorParam {
        match self {
            SuccinctIndex::Mult(i) => i.eps(),
            SuccinctIndex::Add(t) => t.eps(),
        }
    }

    /// Weight width; 0 for additive tables, which do not keep weights.
    pub fn width(&self) -> u32 {
        match self {
            SuccinctIndex::Mult(i) => i.width(),
            SuccinctIndex::Add(_) => 0,
        }
    }

    /// 0-based item index.
    pub fn sample(&self, tape: &mut BitTape) -> Result<usize, TapeExhausted> {
        match self {
            SuccinctIndex::Mult(i) => i.sample(tape),
            SuccinctIndex::Add(t) => t.sample(tape),
        }
    }
}
