use num_bigint::BigUint;
use num_traits::One;

use crate::{BitTape, ErrorParam, Outcome, TapeExhausted};

/// Parameters of the offline `ε`-error uniform sampler over `n` items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OfflinePlan {
    /// Bits read: the smallest `r` with `2^r >= n/ε`.
    pub bits: u64,
    /// Strings per item: `floor(2^r / n)`.
    pub per_item: BigUint,
}

impl OfflinePlan {
    pub fn new(n: u64, eps: ErrorParam) -> Self {
        assert!(n >= 1, "need at least one item");
        let bits = eps.log2_ceil_scaled(&BigUint::from(n));
        let per_item = (BigUint::one() << bits) / n;
        Self { bits, per_item }
    }

    /// Strings mapped to `⊥`: `2^r - n*k`.
    pub fn bot_strings(&self, n: u64) -> BigUint {
        (BigUint::one() << self.bits) - &self.per_item * n
    }
}

/// Reads `r` bits as `x` and returns item `floor(x/k) + 1`, or `⊥` when
/// `x >= n*k`. Every item has probability exactly `k / 2^r`.
pub fn offline_uniform(
    n: u64,
    eps: ErrorParam,
    tape: &mut BitTape,
) -> Result<Outcome, TapeExhausted> {
    let plan = OfflinePlan::new(n, eps);
    let x = tape.next_bits_big(plan.bits)?;
    let idx = &x / &plan.per_item;
    if idx >= BigUint::from(n) {
        return Ok(Outcome::Bot);
    }
    let idx: u64 = idx.try_into().expect("index below n");
    Ok(Outcome::Item(idx + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_item_absorbs_everything() {
        let eps = ErrorParam::power_of_half(1);
        let plan = OfflinePlan::new(1, eps);
        assert_eq!(plan.bits, 1);
        assert_eq!(plan.per_item, BigUint::from(2u8));
        for s in ["0", "1"] {
            let mut t: BitTape = s.parse().unwrap();
            assert_eq!(offline_uniform(1, eps, &mut t), Ok(Outcome::Item(1)));
        }
    }

    #[test]
    fn three_items_quarter() {
        let eps = ErrorParam::power_of_half(2);
        let plan = OfflinePlan::new(3, eps);
        assert_eq!(plan.bits, 4);
        assert_eq!(plan.per_item, BigUint::from(5u8));
        assert_eq!(plan.bot_strings(3), BigUint::from(1u8));
        let mut t = BitTape::from_int(7, 4);
        assert_eq!(offline_uniform(3, eps, &mut t), Ok(Outcome::Item(2)));
        let mut t = BitTape::from_int(15, 4);
        assert_eq!(offline_uniform(3, eps, &mut t), Ok(Outcome::Bot));
        let mut t = BitTape::from_int(14, 4);
        assert_eq!(offline_uniform(3, eps, &mut t), Ok(Outcome::Item(3)));
    }
}
