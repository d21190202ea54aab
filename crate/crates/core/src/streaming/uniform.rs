use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{BitTape, ErrorParam, Outcome, TapeExhausted};

/// One arrival, as seen from the live random string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub from: Outcome,
    pub to: Outcome,
    /// Doubling iterations performed for this arrival.
    pub doublings: u64,
}

/// Implicit representation of the string-to-item map after `t` arrivals.
///
/// The `s = 2^r` random strings of the current length are split into `t`
/// blocks of `h` strings (one per item) plus `h_bot` strings mapped to `⊥`.
/// Only the block sizes and the position (`loc`, `rank`) of the one string
/// actually drawn are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamState {
    eps: ErrorParam,
    t: u64,
    log2_s: u64,
    s: BigUint,
    h: BigUint,
    h_bot: BigUint,
    loc: Outcome,
    rank: BigUint,
}

impl StreamState {
    pub fn new(eps: ErrorParam) -> Self {
        Self {
            eps,
            t: 0,
            log2_s: 0,
            s: BigUint::one(),
            h: BigUint::zero(),
            h_bot: BigUint::zero(),
            loc: Outcome::Bot,
            rank: BigUint::zero(),
        }
    }

    pub fn eps(&self) -> ErrorParam {
        self.eps
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn s(&self) -> &BigUint {
        &self.s
    }

    pub fn log2_s(&self) -> u64 {
        self.log2_s
    }

    pub fn h(&self) -> &BigUint {
        &self.h
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

    /// Random bits consumed so far; always `log2 s`.
    pub fn bits_used(&self) -> u64 {
        self.log2_s
    }

    /// Marks the arrival of item `t + 1`. Call before [`double_step`](Self::double_step).
    pub fn advance_time(&mut self) {
        self.t += 1;
    }

    fn initial_log2(&self) -> u64 {
        self.eps.log2_ceil_scaled(&BigUint::from(4u32))
    }

    fn threshold(&self) -> BigUint {
        let next = BigUint::from(self.t) + 1u32;
        &next * &next
    }

    /// Number of bits [`double_step`](Self::double_step) will read at the current `t`.
    pub fn pending_bits(&self) -> u64 {
        let (mut log2, mut s) = if self.t == 1 {
            let k = self.initial_log2();
            (k, BigUint::one() << k)
        } else {
            (self.log2_s, self.s.clone())
        };
        let start = if self.t == 1 { 0 } else { log2 };
        let thr = self.threshold();
        while self.eps.below_scaled(&s, &thr) {
            s <<= 1u32;
            log2 += 1;
        }
        log2 - start
    }

    /// Extends every string by fresh bits until `s >= (t+1)^2/ε`.
    ///
    /// At `t = 1` the string space is first initialized to
    /// `2^ceil(log2(4/ε))` strings all owned by item 1, and the rank is drawn
    /// uniformly. Returns the number of doubling iterations. Reads nothing
    /// and leaves the state untouched if a fixed tape is too short.
    pub fn double_step(&mut self, tape: &mut BitTape) -> Result<u64, TapeExhausted> {
        assert!(
            self.t >= 1,
            "advance_time must be called before double_step"
        );
        if let Some(left) = tape.remaining() {
            if (left as u64) < self.pending_bits() {
                return Err(TapeExhausted {
                    consumed: tape.bits_consumed(),
                });
            }
        }
        if self.t == 1 {
            self.log2_s = self.initial_log2();
            self.s = BigUint::one() << self.log2_s;
            self.h = self.s.clone();
            self.h_bot = BigUint::zero();
            self.loc = Outcome::Item(1);
            self.rank = tape.uniform_big(&self.s)? + 1u32;
        }
        let thr = self.threshold();
        let mut doublings = 0;
        while self.eps.below_scaled(&self.s, &thr) {
            if tape.next_bit()? {
                self.rank += if self.loc.is_bot() {
                    &self.h_bot
                } else {
                    &self.h
                };
            }
            self.h <<= 1u32;
            self.h_bot <<= 1u32;
            self.s <<= 1u32;
            self.log2_s += 1;
            doublings += 1;
        }
        Ok(doublings)
    }

    /// Rebalances block sizes so the newest item owns `floor(s/t)` strings.
    ///
    /// Each older item gives up the tail of its block; the tails are
    /// concatenated into a list `T`. If `T` is longer than the new block,
    /// its overflow goes to `⊥`; otherwise the new block is topped up from
    /// the end of `⊥`. Consumes no randomness.
    pub fn chop_step(&mut self) {
        let t = self.t;
        if t <= 1 {
            return;
        }
        let keep = &self.s / t;
        let shed = &self.h - &keep;
        let tail_len = &shed * (t - 1);

        if let Outcome::Item(l) = self.loc {
            if self.rank > keep {
                self.rank = &shed * (l - 1) + (&self.rank - &keep);
                self.loc = Outcome::Item(t);
            }
        }

        let bot_new = if tail_len > keep {
            let bot_new = &self.h_bot + &tail_len - &keep;
            if self.loc == Outcome::Item(t) && self.rank > keep {
                self.rank = &self.h_bot + &self.rank - &keep;
                self.loc = Outcome::Bot;
            }
            bot_new
        } else {
            let bot_new = &self.h_bot - (&keep - &tail_len);
            if self.loc == Outcome::Bot && self.rank > bot_new {
                self.rank = &tail_len + &self.rank - &bot_new;
                self.loc = Outcome::Item(t);
            }
            bot_new
        };

        self.h = keep;
        self.h_bot = bot_new;
    }

    /// Handles one arrival: advance time, double, chop.
    ///
    /// Atomic with respect to fixed tapes: if the tape cannot supply the
    /// bits this arrival needs, nothing changes.
    pub fn process(&mut self, tape: &mut BitTape) -> Result<Step, TapeExhausted> {
        let from = self.loc;
        self.t += 1;
        let doublings = match self.double_step(tape) {
            Ok(d) => d,
            Err(e) => {
                self.t -= 1;
                return Err(e);
            }
        };
        self.chop_step();
        Ok(Step {
            from,
            to: self.loc,
            doublings,
        })
    }

    /// Checks the block-size invariants that hold after every arrival.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.t == 0 {
            return Ok(());
        }
        if self.s != BigUint::one() << self.log2_s {
            return Err(format!("s = {} is not 2^{}", self.s, self.log2_s));
        }
        if self.h != &self.s / self.t {
            return Err(format!(
                "h = {} but floor(s/t) = {}",
                self.h,
                &self.s / self.t
            ));
        }
        if &self.h * self.t + &self.h_bot != self.s {
            return Err("h*t + h_bot != s".into());
        }
        if !self.eps.at_most_fraction_of(&self.h_bot, &self.s) {
            return Err(format!("h_bot = {} exceeds eps*s", self.h_bot));
        }
        if self.eps.below_scaled(&self.s, &self.threshold()) {
            return Err("s below (t+1)^2/eps after doubling".into());
        }
        let block = match self.loc {
            Outcome::Item(l) if l >= 1 && l <= self.t => &self.h,
            Outcome::Item(l) => return Err(format!("location {l} outside 1..={}", self.t)),
            Outcome::Bot => &self.h_bot,
        };
        if self.rank.is_zero() || &self.rank > block {
            return Err(format!("rank {} outside 1..={}", self.rank, block));
        }
        Ok(())
    }
}

/// A doubling–chopping sampler that holds at most one payload.
#[derive(Debug, Clone)]
pub struct StreamSampler<T> {
    state: StreamState,
    stored: Option<T>,
    max_buffered: usize,
}

impl<T> StreamSampler<T> {
    pub fn new(eps: ErrorParam) -> Self {
        Self {
            state: StreamState::new(eps),
            stored: None,
            max_buffered: 0,
        }
    }

    pub fn state(&self) -> &StreamState {
        &self.state
    }

    pub fn items_seen(&self) -> u64 {
        self.state.t()
    }

    pub fn bits_used(&self) -> u64 {
        self.state.bits_used()
    }

    /// Feeds the next item. The payload is kept only if the live string
    /// moves into its block; otherwise it is dropped immediately.
    pub fn process(&mut self, item: T, tape: &mut BitTape) -> Result<Step, TapeExhausted> {
        let step = self.state.process(tape)?;
        match step.to {
            Outcome::Item(i) if i == self.state.t() => self.stored = Some(item),
            Outcome::Bot => self.stored = None,
            Outcome::Item(_) => {}
        }
        self.max_buffered = self.max_buffered.max(self.stored.is_some() as usize);
        Ok(step)
    }

    /// The held sample, or `None` for `⊥` (including before any arrival).
    pub fn current_sample(&self) -> Option<&T> {
        self.stored.as_ref()
    }

    /// Largest number of payloads ever held at once.
    pub fn max_buffered(&self) -> usize {
        self.max_buffered
    }

    pub fn into_sample(self) -> Option<T> {
        self.stored
    }
}
