use num_bigint::BigUint;

use super::truncate::{check_width, truncate, TruncatedWeight};
use super::SuccinctError;
use crate::alias::AliasTable;
use crate::{BitTape, ErrorParam, TapeExhausted};

/// Multiplicative-error sampling index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultIndex {
    w: u32,
    eps: ErrorParam,
    truncated: Vec<TruncatedWeight>,
    table: AliasTable,
}

/// Smallest `w` that holds every weight (at least 1).
pub fn min_width(xs: &[u64]) -> u32 {
    xs.iter()
        .map(|&x| 64 - x.leading_zeros())
        .max()
        .unwrap_or(0)
        .max(1)
}

impl MultIndex {
    /// Truncates every weight and builds an alias table over the results.
    ///
    /// `eps` must be a power of 1/2 and each weight must fit in `w` bits.
    pub fn build(xs: &[u64], eps: ErrorParam, w: u32) -> Result<Self, SuccinctError> {
        check_width(w)?;
        let truncated = xs
            .iter()
            .map(|&x| truncate(x, eps, w))
            .collect::<Result<Vec<_>, _>>()?;
        let reconstructed = reconstruct_all(&truncated, w);
        let table = AliasTable::build(&reconstructed)?;
        Ok(Self {
            w,
            eps,
            truncated,
            table,
        })
    }

    /// Reassembles an index from stored truncations and alias pointers.
    pub fn from_parts(
        w: u32,
        eps: ErrorParam,
        truncated: Vec<TruncatedWeight>,
        aliases: &[Option<usize>],
    ) -> Result<Self, SuccinctError> {
        let reconstructed = reconstruct_all(&truncated, w);
        let table = AliasTable::from_aliases(&reconstructed, aliases)?;
        Ok(Self {
            w,
            eps,
            truncated,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.truncated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truncated.is_empty()
    }

    pub fn width(&self) -> u32 {
        self.w
    }

    pub fn eps(&self) -> ErrorParam {
        self.eps
    }

    pub fn truncated(&self) -> &[TruncatedWeight] {
        &self.truncated
    }

    pub fn reconstructed(&self) -> Vec<u64> {
        self.truncated
            .iter()
            .map(|t| t.reconstruct(self.w))
            .collect()
    }

    pub fn table(&self) -> &AliasTable {
        &self.table
    }

    /// 0-based index of the sampled item.
    pub fn sample(&self, tape: &mut BitTape) -> Result<usize, TapeExhausted> {
        self.table.sample(tape)
    }
}

fn reconstruct_all(truncated: &[TruncatedWeight], w: u32) -> Vec<BigUint> {
    truncated
        .iter()
        .map(|t| BigUint::from(t.reconstruct(w)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alias::AliasError;

    #[test]
    fn forty_five_three() {
        let idx = MultIndex::build(&[45, 3], ErrorParam::power_of_half(2), 6).unwrap();
        assert_eq!(idx.reconstructed(), vec![44, 3]);
        assert_eq!(idx.table().total(), &BigUint::from(47u8));
        let owned = idx.table().owned_mass();
        assert_eq!(owned, vec![BigUint::from(88u8), BigUint::from(6u8)]);
    }

    #[test]
    fn equal_weights_stay_uniform() {
        let idx = MultIndex::build(&[1000; 7], ErrorParam::power_of_half(1), 10).unwrap();
        let owned = idx.table().owned_mass();
        assert!(owned.iter().all(|m| m == &owned[0]));
    }

    #[test]
    fn all_zero_rejected() {
        assert_eq!(
            MultIndex::build(&[0, 0, 0], ErrorParam::power_of_half(1), 4),
            Err(SuccinctError::Alias(AliasError::AllZeroWeights))
        );
    }

    #[test]
    fn min_width_of_weights() {
        assert_eq!(min_width(&[0]), 1);
        assert_eq!(min_width(&[45, 3]), 6);
        assert_eq!(min_width(&[u64::MAX]), 64);
    }
}
