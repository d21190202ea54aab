//! Reference samplers for bit-cost comparison.
//!
//! [`BasicReservoir`] replaces its item with probability `1/i` at every
//! arrival. [`VitterReservoir`] instead draws how many items to skip from
//! `f_i(s) = i/((i+s)(i+s+1))`; here that draw uses only random bits, via
//! an array-with-rejection sampler over exact rationals ([`block_sample`])
//! and range doubling for the unbounded tail.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::{BitTape, TapeExhausted};

/// Classic reservoir sampling with a single slot.
#[derive(Debug, Clone)]
pub struct BasicReservoir<T> {
    seen: u64,
    stored: Option<T>,
}

impl<T> Default for BasicReservoir<T> {
    fn default() -> Self {
        Self {
            seen: 0,
            stored: None,
        }
    }
}

impl<T> BasicReservoir<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Item `i` replaces the stored one with probability exactly `1/i`.
    pub fn step(&mut self, item: T, tape: &mut BitTape) -> Result<bool, TapeExhausted> {
        self.seen += 1;
        let replace = tape.bernoulli(1, self.seen)?;
        if replace {
            self.stored = Some(item);
        }
        Ok(replace)
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn sample(&self) -> Option<&T> {
        self.stored.as_ref()
    }
}

/// A distribution over `{0..m}` laid out as the conceptual array `A` in
/// which value `j` appears `floor((m+1) D(j)) + 1` times.
///
/// Implementors answer position queries from closed forms, so `A` itself is
/// never materialized.
pub trait BlockDistribution {
    /// `m + 1`.
    fn support(&self) -> u64;

    /// `(m+1) * D(j)` as a fraction `(num, den)`.
    fn scaled_mass(&self, j: u64) -> (BigUint, BigUint);

    /// `|A|`.
    fn array_len(&self) -> u64;

    /// Value stored at 1-based position `k` and whether `k` is its first copy.
    fn locate(&self, k: u64) -> (u64, bool);

    fn probability(&self, j: u64) -> BigRational {
        let (num, den) = self.scaled_mass(j);
        BigRational::new(num.into(), (den * self.support()).into())
    }
}

/// An explicitly listed rational distribution.
#[derive(Debug, Clone)]
pub struct ExplicitDistribution {
    probs: Vec<BigRational>,
    // Cumulative copy counts: positions ends[j-1]+1 ..= ends[j] hold value j.
    ends: Vec<u64>,
}

impl ExplicitDistribution {
    /// Panics unless the probabilities are non-negative and sum to 1.
    pub fn new(probs: Vec<BigRational>) -> Self {
        assert!(!probs.is_empty());
        let sum: BigRational = probs.iter().sum();
        assert!(sum.is_one(), "probabilities must sum to 1");
        assert!(probs.iter().all(|p| !p.is_negative()));
        let m1 = BigRational::from_integer((probs.len() as u64).into());
        let mut ends = Vec::with_capacity(probs.len());
        let mut acc = 0u64;
        for p in &probs {
            let copies: u64 = (p * &m1)
                .floor()
                .to_integer()
                .try_into()
                .expect("copy count fits u64");
            acc += copies + 1;
            ends.push(acc);
        }
        Self { probs, ends }
    }
}

fn rational_parts(r: &BigRational) -> (BigUint, BigUint) {
    let num = r.numer().to_biguint().expect("non-negative");
    let den = r.denom().to_biguint().expect("positive");
    (num, den)
}

impl BlockDistribution for ExplicitDistribution {
    fn support(&self) -> u64 {
        self.probs.len() as u64
    }

    fn scaled_mass(&self, j: u64) -> (BigUint, BigUint) {
        let scaled =
            &self.probs[j as usize] * BigRational::from_integer((self.probs.len() as u64).into());
        rational_parts(&scaled)
    }

    fn array_len(&self) -> u64 {
        *self.ends.last().unwrap()
    }

    fn locate(&self, k: u64) -> (u64, bool) {
        let j = self.ends.partition_point(|&e| e < k);
        let start = if j == 0 { 1 } else { self.ends[j - 1] + 1 };
        (j as u64, k == start)
    }

    fn probability(&self, j: u64) -> BigRational {
        self.probs[j as usize].clone()
    }
}

/// Vitter's skip distribution `f_i(s) = i/((i+s)(i+s+1))`, `s >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkipDistribution {
    i: u64,
}

impl SkipDistribution {
    pub fn new(i: u64) -> Self {
        assert!(i >= 1, "reservoir time starts at 1");
        Self { i }
    }

    pub fn pmf(&self, s: u64) -> BigRational {
        let i = BigUint::from(self.i);
        let a = &i + s;
        let b = &a + 1u32;
        BigRational::new(i.into(), (a * b).into())
    }

    /// `Pr[skip <= m] = 1 - i/(i+m+1)`.
    pub fn cdf(&self, m: u64) -> BigRational {
        BigRational::one() - self.tail_beyond(m)
    }

    /// `Pr[skip > m] = i/(i+m+1)`.
    pub fn tail_beyond(&self, m: u64) -> BigRational {
        let i = BigUint::from(self.i);
        let d = &i + m + 1u32;
        BigRational::new(i.into(), d.into())
    }

    /// One window of the distribution: values `0..=i` plus a tail bucket.
    pub fn window(&self) -> SkipWindow {
        SkipWindow { i: self.i }
    }
}

/// `f_i` truncated to `{0..i}` with value `i+1` standing for `skip > i`.
///
/// With `m + 1 = i + 2` the copy counts have closed forms: value 0 has two
/// copies, each of `1..=i` has one, and the tail value has
/// `floor((i+2) i / (2i+1)) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkipWindow {
    i: u64,
}

impl SkipWindow {
    fn tail_copies(&self) -> u64 {
        let i = self.i as u128;
        ((i + 2) * i / (2 * i + 1)) as u64 + 1
    }
}

impl BlockDistribution for SkipWindow {
    fn support(&self) -> u64 {
        self.i + 2
    }

    fn scaled_mass(&self, j: u64) -> (BigUint, BigUint) {
        let i = BigUint::from(self.i);
        let num = (&i + 2u32) * &i;
        if j <= self.i {
            let a = &i + j;
            let b = &a + 1u32;
            (num, a * b)
        } else {
            (num, &i * 2u32 + 1u32)
        }
    }

    fn array_len(&self) -> u64 {
        self.i + 2 + self.tail_copies()
    }

    fn locate(&self, k: u64) -> (u64, bool) {
        match k {
            1 => (0, true),
            2 => (0, false),
            k if k <= self.i + 2 => (k - 2, true),
            k => (self.i + 1, k == self.i + 3),
        }
    }
}

/// One round of the array-with-rejection sampler.
///
/// Picks a uniform position of `A`. A first copy of value `j` is
/// kept only with probability `frac((m+1) D(j))`. `None` means the round
/// was rejected and must be repeated.
pub fn block_round<D: BlockDistribution + ?Sized>(
    dist: &D,
    tape: &mut BitTape,
) -> Result<Option<u64>, TapeExhausted> {
    let len = dist.array_len();
    let v = tape.uniform_recycling(len)?;
    let (j, first) = dist.locate(v + 1);
    if first {
        let (num, den) = dist.scaled_mass(j);
        let frac = num.mod_floor(&den);
        if !tape.bernoulli_big(&frac, &den)? {
            return Ok(None);
        }
    }
    Ok(Some(j))
}

/// Exact sample from `dist`: repeats [`block_round`] until it accepts.
pub fn block_sample<D: BlockDistribution + ?Sized>(
    dist: &D,
    tape: &mut BitTape,
) -> Result<u64, TapeExhausted> {
    loop {
        if let Some(j) = block_round(dist, tape)? {
            return Ok(j);
        }
    }
}

/// Draws a skip length from `f_i`.
pub fn vitter_skip(i: u64, tape: &mut BitTape) -> Result<u64, TapeExhausted> {
    Ok(vitter_skip_within(i, u64::MAX, tape)?.expect("unbounded horizon"))
}

/// Draws a skip from `f_i`, stopping early with `None` once the skip is
/// known to exceed `horizon`.
///
/// Conditioned on `skip >= a`, `skip - a` follows `f_{i+a}`; so after each
/// tail outcome the window restarts at offset `a` with `i + a` in place of
/// `i`, doubling its width.
pub fn vitter_skip_within(
    i: u64,
    horizon: u64,
    tape: &mut BitTape,
) -> Result<Option<u64>, TapeExhausted> {
    let mut offset = 0u64;
    loop {
        let cur = i.checked_add(offset).expect("skip window overflowed u64");
        let j = block_sample(&SkipWindow { i: cur }, tape)?;
        if j <= cur {
            let s = offset + j;
            return Ok((s <= horizon).then_some(s));
        }
        offset = offset
            .checked_add(cur + 1)
            .expect("skip offset overflowed u64");
        if offset > horizon {
            return Ok(None);
        }
    }
}

/// Skip-based reservoir: randomness is spent only when an item is stored.
#[derive(Debug, Clone)]
pub struct VitterReservoir<T> {
    seen: u64,
    next_take: u64,
    stored: Option<T>,
    skips: u64,
}

impl<T> Default for VitterReservoir<T> {
    fn default() -> Self {
        Self {
            seen: 0,
            next_take: 1,
            stored: None,
            skips: 0,
        }
    }
}

impl<T> VitterReservoir<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn step(&mut self, item: T, tape: &mut BitTape) -> Result<bool, TapeExhausted> {
        self.seen += 1;
        if self.seen != self.next_take {
            return Ok(false);
        }
        self.stored = Some(item);
        let s = vitter_skip(self.seen, tape)?;
        self.skips += 1;
        self.next_take = self.seen + s + 1;
        Ok(true)
    }

    pub fn sample(&self) -> Option<&T> {
        self.stored.as_ref()
    }

    /// Skip lengths drawn so far.
    pub fn skips_drawn(&self) -> u64 {
        self.skips
    }
}

/// Final stored index after a skip-based reservoir sees `n` items, drawing
/// each skip only as far as needed to tell whether it lands within `n`.
pub fn vitter_final_index(n: u64, tape: &mut BitTape) -> Result<u64, TapeExhausted> {
    assert!(n >= 1);
    let mut i = 1;
    while i < n {
        match vitter_skip_within(i, n - i - 1, tape)? {
            Some(s) => i += s + 1,
            None => break,
        }
    }
    Ok(i)
}
