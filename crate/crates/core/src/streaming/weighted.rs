use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use super::Step;
use crate::{BitTape, ErrorParam, Outcome, TapeExhausted};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WeightedError {
    /// The item had weight 0 and was skipped without touching the state.
    #[error("zero-weight item skipped")]
    ZeroWeight,
    #[error(transparent)]
    Tape(#[from] TapeExhausted),
}

/// Weighted generalization of [`StreamState`](super::StreamState).
///
/// Behaves like the uniform sampler run on `w_i` unit copies of each item,
/// but rebalances all copies of an item in one aggregate chop. Item `i`
/// owns a block of `w_i * u` strings with `u = floor(s/W)`, and the
/// remaining `s - W*u` strings map to `⊥`.
///
/// Besides the block sizes, the state remembers the weight of the located
/// item and the total weight that arrived before it; that is all the chop
/// needs to find the live string's position in the concatenated tails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedStreamState {
    eps: ErrorParam,
    t: u64,
    total: BigUint,
    log2_s: u64,
    s: BigUint,
    unit: BigUint,
    h_bot: BigUint,
    loc: Outcome,
    rank: BigUint,
    loc_weight: BigUint,
    loc_prefix: BigUint,
}

impl WeightedStreamState {
    pub fn new(eps: ErrorParam) -> Self {
        Self {
            eps,
            t: 0,
            total: BigUint::zero(),
            log2_s: 0,
            s: BigUint::one(),
            unit: BigUint::zero(),
            h_bot: BigUint::zero(),
            loc: Outcome::Bot,
            rank: BigUint::zero(),
            loc_weight: BigUint::zero(),
            loc_prefix: BigUint::zero(),
        }
    }

    pub fn eps(&self) -> ErrorParam {
        self.eps
    }

    /// Positive-weight items processed so far.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn total_weight(&self) -> &BigUint {
        &self.total
    }

    pub fn s(&self) -> &BigUint {
        &self.s
    }

    pub fn log2_s(&self) -> u64 {
        self.log2_s
    }

    /// Strings per unit of weight.
    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn h_bot(&self) -> &BigUint {
        &self.h_bot
    }

    pub fn location(&self) -> Outcome {
        self.loc
    }

    pub fn rank(&self) -> &BigUint {
        &self.rank
    }

    pub fn bits_used(&self) -> u64 {
        self.log2_s
    }

    /// Distinct bits the next arrival of `weight` will read.
    pub fn pending_bits(&self, weight: u64) -> u64 {
        let total = &self.total + weight;
        let mut log2 = if self.t == 0 {
            self.eps.log2_ceil_scaled(&BigUint::from(4u32))
        } else {
            self.log2_s
        };
        let start = if self.t == 0 { 0 } else { log2 };
        let next = total + 1u32;
        let thr = &next * &next;
        let mut s = BigUint::one() << log2;
        while self.eps.below_scaled(&s, &thr) {
            s <<= 1u32;
            log2 += 1;
        }
        log2 - start
    }

    fn block_len(&self) -> BigUint {
        match self.loc {
            Outcome::Bot => self.h_bot.clone(),
            Outcome::Item(_) => &self.loc_weight * &self.unit,
        }
    }

    /// Processes an item of positive weight.
    pub fn process(&mut self, weight: u64, tape: &mut BitTape) -> Result<Step, WeightedError> {
        if weight == 0 {
            return Err(WeightedError::ZeroWeight);
        }
        if let Some(left) = tape.remaining() {
            if (left as u64) < self.pending_bits(weight) {
                return Err(TapeExhausted {
                    consumed: tape.bits_consumed(),
                }
                .into());
            }
        }
        let from = self.loc;
        let w = BigUint::from(weight);
        let total_new = &self.total + &w;
        let next = &total_new + 1u32;
        let thr = &next * &next;
        let mut doublings = 0;

        if self.t == 0 {
            // All strings start in item 1's block; the split of that block
            // between item 1 and ⊥ happens after doubling.
            self.log2_s = self.eps.log2_ceil_scaled(&BigUint::from(4u32));
            self.s = BigUint::one() << self.log2_s;
            self.rank = tape.uniform_big(&self.s)? + 1u32;
            while self.eps.below_scaled(&self.s, &thr) {
                if tape.next_bit()? {
                    self.rank += &self.s;
                }
                self.s <<= 1u32;
                self.log2_s += 1;
                doublings += 1;
            }
            self.t = 1;
            self.unit = &self.s / &w;
            let keep = &w * &self.unit;
            self.h_bot = &self.s - &keep;
            self.loc_weight = w;
            self.loc_prefix = BigUint::zero();
            if self.rank > keep {
                self.rank -= &keep;
                self.loc = Outcome::Bot;
            } else {
                self.loc = Outcome::Item(1);
            }
            self.total = total_new;
            return Ok(Step {
                from,
                to: self.loc,
                doublings,
            });
        }

        while self.eps.below_scaled(&self.s, &thr) {
            if tape.next_bit()? {
                self.rank += self.block_len();
            }
            self.unit <<= 1u32;
            self.h_bot <<= 1u32;
            self.s <<= 1u32;
            self.log2_s += 1;
            doublings += 1;
        }

        self.t += 1;
        let t = self.t;
        let unit_new = &self.s / &total_new;
        let shed = &self.unit - &unit_new;
        let tail_len = &self.total * &shed;
        let fresh = &w * &unit_new;

        if let Outcome::Item(_) = self.loc {
            let keep = &self.loc_weight * &unit_new;
            if self.rank > keep {
                self.rank = &self.loc_prefix * &shed + (&self.rank - &keep);
                self.loc = Outcome::Item(t);
            }
        }

        let bot_new = if tail_len > fresh {
            let bot_new = &self.h_bot + &tail_len - &fresh;
            if self.loc == Outcome::Item(t) && self.rank > fresh {
                self.rank = &self.h_bot + &self.rank - &fresh;
                self.loc = Outcome::Bot;
            }
            bot_new
        } else {
            let bot_new = &self.h_bot - (&fresh - &tail_len);
            if self.loc == Outcome::Bot && self.rank > bot_new {
                self.rank = &tail_len + &self.rank - &bot_new;
                self.loc = Outcome::Item(t);
            }
            bot_new
        };

        if self.loc == Outcome::Item(t) {
            self.loc_prefix = self.total.clone();
            self.loc_weight = w;
        }
        self.unit = unit_new;
        self.h_bot = bot_new;
        self.total = total_new;
        Ok(Step {
            from,
            to: self.loc,
            doublings,
        })
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        if self.t == 0 {
            return Ok(());
        }
        if self.s != BigUint::one() << self.log2_s {
            return Err("s is not a power of two".into());
        }
        if self.unit != &self.s / &self.total {
            return Err("u != floor(s/W)".into());
        }
        if &self.total * &self.unit + &self.h_bot != self.s {
            return Err("W*u + h_bot != s".into());
        }
        if !self.eps.at_most_fraction_of(&self.h_bot, &self.s) {
            return Err("h_bot exceeds eps*s".into());
        }
        let next = &self.total + 1u32;
        if self.eps.below_scaled(&self.s, &(&next * &next)) {
            return Err("s below (W+1)^2/eps".into());
        }
        if let Outcome::Item(l) = self.loc {
            if l == 0 || l > self.t {
                return Err(format!("location {l} outside 1..={}", self.t));
            }
        }
        if self.rank.is_zero() || self.rank > self.block_len() {
            return Err(format!("rank {} outside its block", self.rank));
        }
        Ok(())
    }
}

/// Weighted streaming sampler holding at most one payload.
#[derive(Debug, Clone)]
pub struct WeightedSampler<T> {
    state: WeightedStreamState,
    stored: Option<T>,
    stored_weight: u64,
    skipped: u64,
    max_buffered: usize,
}

impl<T> WeightedSampler<T> {
    pub fn new(eps: ErrorParam) -> Self {
        Self {
            state: WeightedStreamState::new(eps),
            stored: None,
            stored_weight: 0,
            skipped: 0,
            max_buffered: 0,
        }
    }

    pub fn state(&self) -> &WeightedStreamState {
        &self.state
    }

    pub fn bits_used(&self) -> u64 {
        self.state.bits_used()
    }

    /// Zero-weight items seen (and ignored).
    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    pub fn process(
        &mut self,
        item: T,
        weight: u64,
        tape: &mut BitTape,
    ) -> Result<Step, WeightedError> {
        let step = match self.state.process(weight, tape) {
            Err(WeightedError::ZeroWeight) => {
                self.skipped += 1;
                return Err(WeightedError::ZeroWeight);
            }
            other => other?,
        };
        match step.to {
            Outcome::Item(i) if i == self.state.t() => {
                self.stored = Some(item);
                self.stored_weight = weight;
            }
            Outcome::Bot => self.stored = None,
            Outcome::Item(_) => {}
        }
        self.max_buffered = self.max_buffered.max(self.stored.is_some() as usize);
        Ok(step)
    }

    pub fn current_sample(&self) -> Option<&T> {
        self.stored.as_ref()
    }

    /// Weight of the held sample, if any.
    pub fn current_weight(&self) -> Option<u64> {
        self.stored.as_ref().map(|_| self.stored_weight)
    }

    pub fn max_buffered(&self) -> usize {
        self.max_buffered
    }
}
