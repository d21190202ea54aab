use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use super::SuccinctError;
use crate::alias::AliasError;
use crate::randbits::to_u64;
use crate::{BitTape, ErrorParam, TapeExhausted};

/// Additive-error sampling array of `m = 1/ε` slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveTable {
    n: usize,
    eps: ErrorParam,
    slots: Vec<usize>,
    counts: Vec<u64>,
}

impl AdditiveTable {
    /// Gives item `i` either `floor(m x_i / S)` or one more slot, choosing
    /// the extra slots by largest remainder (lower index on ties).
    pub fn build(xs: &[u64], eps: ErrorParam) -> Result<Self, SuccinctError> {
        let m = eps
            .inverse()
            .ok_or(SuccinctError::NonIntegerInverseEps(eps))?;
        let total: BigUint = xs.iter().map(|&x| BigUint::from(x)).sum();
        if total.is_zero() {
            return Err(AliasError::AllZeroWeights.into());
        }
        let mut counts = Vec::with_capacity(xs.len());
        let mut remainders = Vec::with_capacity(xs.len());
        for &x in xs {
            let (q, r) = (BigUint::from(x) * m).div_rem(&total);
            counts.push(to_u64(&q).expect("count at most m"));
            remainders.push(r);
        }
        let assigned: u64 = counts.iter().sum();
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| remainders[b].cmp(&remainders[a]).then(a.cmp(&b)));
        for &i in order.iter().take((m - assigned) as usize) {
            counts[i] += 1;
        }
        Ok(Self::from_counts(eps, counts))
    }

    fn from_counts(eps: ErrorParam, counts: Vec<u64>) -> Self {
        let slots = counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
            .collect();
        Self {
            n: counts.len(),
            eps,
            slots,
            counts,
        }
    }

    /// Rebuilds a table from its slot array; slots must be ascending.
    pub fn from_slots(n: usize, eps: ErrorParam, slots: Vec<usize>) -> Result<Self, SuccinctError> {
        let m = eps
            .inverse()
            .ok_or(SuccinctError::NonIntegerInverseEps(eps))?;
        if slots.len() as u64 != m {
            return Err(SuccinctError::Corrupt(format!(
                "{} slots, expected {m}",
                slots.len()
            )));
        }
        if slots.windows(2).any(|p| p[0] > p[1]) || slots.iter().any(|&i| i >= n) {
            return Err(SuccinctError::Corrupt(
                "slot array out of order or out of range".into(),
            ));
        }
        let mut counts = vec![0u64; n];
        for &i in &slots {
            counts[i] += 1;
        }
        Ok(Self {
            n,
            eps,
            slots,
            counts,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn eps(&self) -> ErrorParam {
        self.eps
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// 0-based index of the item in a uniformly chosen slot.
    pub fn sample(&self, tape: &mut BitTape) -> Result<usize, TapeExhausted> {
        let k = tape.uniform_u64(self.slots.len() as u64)?;
        Ok(self.slots[k as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(m: u64) -> ErrorParam {
        ErrorParam::new(1, m).unwrap()
    }

    #[test]
    fn one_three_quarter() {
        let t = AdditiveTable::build(&[1, 3], eps(4)).unwrap();
        assert_eq!(t.counts(), &[1, 3]);
        assert_eq!(t.slots(), &[0, 1, 1, 1]);
    }

    #[test]
    fn pair_half() {
        assert_eq!(
            AdditiveTable::build(&[1, 1], eps(2)).unwrap().counts(),
            &[1, 1]
        );
    }

    #[test]
    fn ties_go_to_lower_index() {
        assert_eq!(
            AdditiveTable::build(&[1, 1, 1], eps(4)).unwrap().counts(),
            &[2, 1, 1]
        );
        assert_eq!(
            AdditiveTable::build(&[1, 1, 1], eps(5)).unwrap().counts(),
            &[2, 2, 1]
        );
    }

    #[test]
    fn largest_remainders_win() {
        // 2·(2,5,3)/10 = (0.4, 1.0, 0.6)
        assert_eq!(
            AdditiveTable::build(&[2, 5, 3], eps(2)).unwrap().counts(),
            &[0, 1, 1]
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            AdditiveTable::build(&[1, 2], ErrorParam::new(2, 5).unwrap()),
            Err(SuccinctError::NonIntegerInverseEps(_))
        ));
        assert!(matches!(
            AdditiveTable::build(&[0, 0], eps(4)),
            Err(SuccinctError::Alias(_))
        ));
    }

    #[test]
    fn slots_round_trip() {
        let t = AdditiveTable::build(&[9, 0, 4, 4, 1], eps(16)).unwrap();
        let back = AdditiveTable::from_slots(5, eps(16), t.slots().to_vec()).unwrap();
        assert_eq!(back, t);
        assert!(AdditiveTable::from_slots(5, eps(16), vec![0; 15]).is_err());
    }
}
