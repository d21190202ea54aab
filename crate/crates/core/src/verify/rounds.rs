//! Oracles for samplers with unbounded rejection loops.
//!
//! A naive tape search never terminates on these, so one round is
//! enumerated bit by bit and the loop is solved in closed form: if a round
//! accepts `j` with mass `a_j` and everything undecided at the depth limit
//! has mass `u`, then `Pr[j]` lies in `[a_j, a_j + u] / (Σ a + u)`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::enumerate_tapes;
use crate::baselines::{block_round, BlockDistribution, SkipDistribution};
use crate::randbits::ceil_log2_u64;

/// Closed interval of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Bounds {
    pub fn exact(v: BigRational) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    fn add(&self, o: &Bounds) -> Bounds {
        Bounds {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn mul(&self, o: &Bounds) -> Bounds {
        Bounds {
            lo: &self.lo * &o.lo,
            hi: &self.hi * &o.hi,
        }
    }

    fn complement(&self) -> Bounds {
        Bounds {
            lo: BigRational::one() - &self.hi,
            hi: BigRational::one() - &self.lo,
        }
    }

    fn zero() -> Bounds {
        Bounds::exact(BigRational::zero())
    }
}

#[derive(Debug, Clone)]
pub struct BlockOracle {
    /// Bounds on the final probability of each value `0..=m`.
    pub values: Vec<Bounds>,
    /// Reject mass of one round, as far as it was resolved.
    pub reject: BigRational,
    /// `u / (Σ a + u)`: the width of every interval.
    pub residual: BigRational,
    pub leaves: u64,
}

/// Enumerates one round of the block sampler to `ceil(log2 |A|) + extra`
/// bits and solves the rejection loop.
pub fn block_sampler_oracle<D: BlockDistribution + ?Sized>(dist: &D, extra: u32) -> BlockOracle {
    let depth = ceil_log2_u64(dist.array_len()) + extra;
    let e = enumerate_tapes(depth, |t| block_round(dist, t));
    let m = dist.support();
    let mut accepted = vec![BigRational::zero(); m as usize];
    let mut reject = BigRational::zero();
    for (k, p) in &e.masses {
        match k {
            Some(j) => accepted[*j as usize] += p,
            None => reject += p,
        }
    }
    let total: BigRational = accepted.iter().sum::<BigRational>() + &e.undecided;
    let values = accepted
        .iter()
        .map(|a| Bounds {
            lo: a / &total,
            hi: (a + &e.undecided) / &total,
        })
        .collect();
    BlockOracle {
        values,
        reject,
        residual: &e.undecided / &total,
        leaves: e.leaves,
    }
}

/// Skip distribution within a horizon: bounds on `Pr[s = v]` for
/// `v <= horizon`, then on `Pr[s > horizon]`, following the range-doubling
/// windows one oracle at a time.
fn skip_bounds(
    i: u64,
    horizon: u64,
    extra: u32,
    cache: &mut HashMap<u64, BlockOracle>,
) -> Vec<Bounds> {
    let mut out = vec![Bounds::zero(); horizon as usize + 1];
    let mut reach = Bounds::exact(BigRational::one());
    let mut offset = 0u64;
    while offset <= horizon {
        let cur = i + offset;
        let oracle = cache
            .entry(cur)
            .or_insert_with(|| block_sampler_oracle(&SkipDistribution::new(cur).window(), extra));
        for j in 0..=cur {
            let s = offset + j;
            if s > horizon {
                break;
            }
            out[s as usize] = reach.mul(&oracle.values[j as usize]);
        }
        reach = reach.mul(&oracle.values[cur as usize + 1]);
        offset += cur + 1;
    }
    let within = out.iter().fold(Bounds::zero(), |acc, b| acc.add(b));
    out.push(within.complement());
    out
}

/// Bounds on the probability that each of items `1..=n` is the final
/// sample of the skip-based reservoir.
pub fn vitter_final_bounds(n: u64, extra: u32) -> Vec<Bounds> {
    assert!(n >= 1);
    let mut cache = HashMap::new();
    let mut take = vec![Bounds::zero(); n as usize + 1];
    take[1] = Bounds::exact(BigRational::one());
    let mut fin = vec![Bounds::zero(); n as usize + 1];
    for i in 1..n {
        let sb = skip_bounds(i, n - i - 1, extra, &mut cache);
        for s in 0..n - i {
            let next = (i + s + 1) as usize;
            take[next] = take[next].add(&take[i as usize].mul(&sb[s as usize]));
        }
        fin[i as usize] = take[i as usize].mul(sb.last().unwrap());
    }
    fin[n as usize] = take[n as usize].clone();
    fin.remove(0);
    fin
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::ExplicitDistribution;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn uniform_pair_bounds() {
        let d = ExplicitDistribution::new(vec![q(1, 2), q(1, 2)]);
        let o = block_sampler_oracle(&d, 24);
        assert!(o.residual < q(1, 1 << 20));
        for v in &o.values {
            assert!(v.contains(&q(1, 2)), "{v:?}");
        }
    }

    #[test]
    fn f1_window_bounds() {
        let w = SkipDistribution::new(1).window();
        let o = block_sampler_oracle(&w, 24);
        assert!(o.values[0].contains(&q(1, 2)));
        assert!(o.values[1].contains(&q(1, 6)));
        assert!(o.values[2].contains(&q(1, 3)));
    }

    #[test]
    fn vitter_three_items() {
        for b in vitter_final_bounds(3, 24) {
            assert!(b.contains(&q(1, 3)), "{b:?}");
            assert!(b.width() < q(1, 1 << 20));
        }
    }
}
