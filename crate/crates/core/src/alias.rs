//! Exact alias tables over arbitrary-precision integer weights.
//!
//! Scaling every weight by `n` turns the usual real-valued thresholds into
//! integers: bucket `j` holds total mass `S = Σ x_i`, of which `cut` belongs
//! to item `j` and the rest to its alias. A query draws one uniform integer
//! in `[0, n*S)`, so `Pr[i] = x_i / S` exactly.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::{BitTape, TapeExhausted};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AliasError {
    #[error("at least one weight must be positive")]
    AllZeroWeights,
    #[error("alias structure is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    /// Mass owned by the bucket's own item (the bucket index).
    pub cut: BigUint,
    pub alias: Option<usize>,
}

/// Worklist traffic of one build, for complexity checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub pushes: usize,
    pub pops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasTable {
    total: BigUint,
    buckets: Vec<Bucket>,
}

impl AliasTable {
    pub fn build(weights: &[BigUint]) -> Result<Self, AliasError> {
        Self::build_with_stats(weights).map(|(t, _)| t)
    }

    /// Two-worklist construction. Both lists are FIFO queues seeded in
    /// ascending index order; an item that drops below `S` joins the back
    /// of the deficit queue.
    pub fn build_with_stats(weights: &[BigUint]) -> Result<(Self, BuildStats), AliasError> {
        let n = weights.len();
        let total: BigUint = weights.iter().sum();
        if total.is_zero() {
            return Err(AliasError::AllZeroWeights);
        }
        let mut stats = BuildStats::default();
        let mut mass: Vec<BigUint> = weights.iter().map(|w| w * n).collect();
        let mut small = VecDeque::new();
        let mut large = VecDeque::new();
        for (i, m) in mass.iter().enumerate() {
            if *m < total {
                small.push_back(i);
            } else {
                large.push_back(i);
            }
            stats.pushes += 1;
        }
        let mut buckets: Vec<Option<Bucket>> = vec![None; n];
        while let (Some(j), Some(k)) = (small.front().copied(), large.front().copied()) {
            small.pop_front();
            stats.pops += 1;
            let deficit = &total - &mass[j];
            buckets[j] = Some(Bucket {
                cut: std::mem::take(&mut mass[j]),
                alias: Some(k),
            });
            mass[k] -= deficit;
            if mass[k] < total {
                large.pop_front();
                stats.pops += 1;
                small.push_back(k);
                stats.pushes += 1;
            }
        }
        // With exact arithmetic every leftover holds exactly S.
        for j in small.into_iter().chain(large) {
            stats.pops += 1;
            debug_assert_eq!(mass[j], total);
            buckets[j] = Some(Bucket {
                cut: total.clone(),
                alias: None,
            });
        }
        let buckets = buckets
            .into_iter()
            .map(|b| b.expect("every item owns one bucket"))
            .collect();
        Ok((Self { total, buckets }, stats))
    }

    /// Rebuilds the cut values from weights and alias pointers alone.
    ///
    /// Each item's owned mass is `cut_j + Σ_{k: alias k = j} (S - cut_k)`,
    /// which must equal `n * x_j`; solving from the leaves of the alias
    /// forest recovers every cut.
    pub fn from_aliases(
        weights: &[BigUint],
        aliases: &[Option<usize>],
    ) -> Result<Self, AliasError> {
        let n = weights.len();
        if aliases.len() != n {
            return Err(AliasError::Inconsistent(
                "alias count differs from item count".into(),
            ));
        }
        let total: BigUint = weights.iter().sum();
        if total.is_zero() {
            return Err(AliasError::AllZeroWeights);
        }
        let mut pending = vec![0usize; n];
        for (j, a) in aliases.iter().enumerate() {
            if let Some(k) = *a {
                if k >= n || k == j {
                    return Err(AliasError::Inconsistent(format!("bucket {j} aliases {k}")));
                }
                pending[k] += 1;
            }
        }
        let mut mass: Vec<BigUint> = weights.iter().map(|w| w * n).collect();
        let mut cuts: Vec<Option<BigUint>> = vec![None; n];
        let mut ready: Vec<usize> = (0..n).filter(|&j| pending[j] == 0).collect();
        while let Some(j) = ready.pop() {
            let cut = std::mem::take(&mut mass[j]);
            if cut > total {
                return Err(AliasError::Inconsistent(format!("bucket {j} overfull")));
            }
            match aliases[j] {
                Some(_) if cut == total => {
                    return Err(AliasError::Inconsistent(format!(
                        "full bucket {j} has an alias"
                    )));
                }
                Some(k) => {
                    let given = &total - &cut;
                    if mass[k] < given {
                        return Err(AliasError::Inconsistent(format!("item {k} overdrawn")));
                    }
                    mass[k] -= given;
                    pending[k] -= 1;
                    if pending[k] == 0 {
                        ready.push(k);
                    }
                }
                None if cut != total => {
                    return Err(AliasError::Inconsistent(format!(
                        "unaliased bucket {j} not full"
                    )));
                }
                None => {}
            }
            cuts[j] = Some(cut);
        }
        let buckets = cuts
            .into_iter()
            .zip(aliases)
            .map(|(cut, &alias)| cut.map(|cut| Bucket { cut, alias }))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| AliasError::Inconsistent("alias pointers form a cycle".into()))?;
        Ok(Self { total, buckets })
    }

    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// `S`, the sum of the weights.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn buckets(&self) -> &[Bucket] {
        &self.buckets
    }

    pub fn aliases(&self) -> Vec<Option<usize>> {
        self.buckets.iter().map(|b| b.alias).collect()
    }

    /// 0-based item index with probability `x_i / S`.
    pub fn sample(&self, tape: &mut BitTape) -> Result<usize, TapeExhausted> {
        let space = &self.total * self.buckets.len();
        let u = tape.uniform_big(&space)?;
        let bucket: usize = (&u / &self.total)
            .try_into()
            .expect("bucket index fits usize");
        let offset = u % &self.total;
        let b = &self.buckets[bucket];
        if offset < b.cut {
            Ok(bucket)
        } else {
            Ok(b.alias.expect("partial bucket has an alias"))
        }
    }

    /// Mass each item owns out of `n * S` equally likely outcomes.
    pub fn owned_mass(&self) -> Vec<BigUint> {
        let mut owned = vec![BigUint::zero(); self.buckets.len()];
        for (j, b) in self.buckets.iter().enumerate() {
            owned[j] += &b.cut;
            if let Some(k) = b.alias {
                owned[k] += &self.total - &b.cut;
            }
        }
        owned
    }
}
