//! Random-bit sources with exact consumption accounting.
//!
//! Every sampler in this crate draws its randomness one bit at a time from a
//! [`BitTape`]. The tape counts each bit it hands out, so the number of random
//! bits an algorithm used is an exact, observable quantity rather than an
//! estimate. Uniform integers and rational-probability coin flips are built
//! from those bits alone; there is no floating-point randomness anywhere.
//!
//! Bits are assembled into integers most-significant-bit first, so a fixed
//! tape such as `"110"` always decodes to 6 regardless of platform.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

/// A fixed tape ran out of bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("bit tape exhausted after {consumed} bits")]
pub struct TapeExhausted {
    pub consumed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit string: unexpected character {0:?}")]
pub struct ParseTapeError(char);

enum Source {
    Fixed { bits: Vec<bool>, pos: usize },
    Seeded(Box<WordBuffer<ChaCha20Rng>>),
    External(WordBuffer<Box<dyn RngCore + Send>>),
}

struct WordBuffer<R> {
    rng: R,
    word: u64,
    left: u32,
}

impl<R: RngCore> WordBuffer<R> {
    fn new(rng: R) -> Self {
        Self {
            rng,
            word: 0,
            left: 0,
        }
    }

    #[inline]
    fn bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        self.left -= 1;
        (self.word >> self.left) & 1 == 1
    }

    /// Up to 64 bits, MSB-first, pulled from the buffered words.
    fn bits(&mut self, k: u32) -> u64 {
        debug_assert!(k <= 64);
        if k == 0 {
            return 0;
        }
        if k <= self.left {
            self.left -= k;
            let v = self.word >> self.left;
            return if k == 64 { v } else { v & ((1u64 << k) - 1) };
        }
        let mut v = 0u64;
        for _ in 0..k {
            v = (v << 1) | self.bit() as u64;
        }
        v
    }
}

/// A source of random bits that counts exactly how many it has produced.
///
/// A tape is single-owner: it is `Send` but deliberately not `Sync`. Run
/// parallel experiments on independent tapes with distinct seeds.
pub struct BitTape {
    source: Source,
    consumed: u64,
}

impl fmt::Debug for BitTape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::Fixed { bits, pos } => format!("Fixed({}/{})", pos, bits.len()),
            Source::Seeded(_) => "Seeded(ChaCha20)".to_string(),
            Source::External(_) => "External".to_string(),
        };
        f.debug_struct("BitTape")
            .field("source", &kind)
            .field("consumed", &self.consumed)
            .finish()
    }
}

impl BitTape {
    /// Reproducible pseudorandom tape: a ChaCha20 keystream keyed from `seed`.
    pub fn seeded(seed: u64) -> Self {
        Self {
            source: Source::Seeded(Box::new(WordBuffer::new(ChaCha20Rng::seed_from_u64(seed)))),
            consumed: 0,
        }
    }

    /// Wraps any caller-supplied generator, e.g. an OS entropy source.
    pub fn from_rng<R: RngCore + Send + 'static>(rng: R) -> Self {
        Self {
            source: Source::External(WordBuffer::new(Box::new(rng))),
            consumed: 0,
        }
    }

    /// A finite tape; requesting bit `len + 1` fails with [`TapeExhausted`].
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self {
            source: Source::Fixed {
                bits: bits.into_iter().collect(),
                pos: 0,
            },
            consumed: 0,
        }
    }

    /// The `len`-bit binary representation of `value`, MSB first.
    pub fn from_int(value: u64, len: u32) -> Self {
        assert!(len <= 64);
        Self::from_bits((0..len).rev().map(|i| (value >> i) & 1 == 1))
    }

    pub fn bits_consumed(&self) -> u64 {
        self.consumed
    }

    /// Bits left on a fixed tape; `None` for unbounded sources.
    pub fn remaining(&self) -> Option<usize> {
        match &self.source {
            Source::Fixed { bits, pos } => Some(bits.len() - pos),
            _ => None,
        }
    }

    #[inline]
    pub fn next_bit(&mut self) -> Result<bool, TapeExhausted> {
        let bit = match &mut self.source {
            Source::Fixed { bits, pos } => {
                let Some(&b) = bits.get(*pos) else {
                    return Err(TapeExhausted {
                        consumed: self.consumed,
                    });
                };
                *pos += 1;
                b
            }
            Source::Seeded(buf) => buf.bit(),
            Source::External(buf) => buf.bit(),
        };
        self.consumed += 1;
        Ok(bit)
    }

    /// Reads `k <= 64` bits as an unsigned integer, MSB first.
    pub fn next_bits(&mut self, k: u32) -> Result<u64, TapeExhausted> {
        assert!(k <= 64, "at most 64 bits per call");
        let v = match &mut self.source {
            Source::Seeded(buf) => buf.bits(k),
            Source::External(buf) => buf.bits(k),
            Source::Fixed { .. } => {
                let mut v = 0u64;
                for _ in 0..k {
                    v = (v << 1) | self.next_bit()? as u64;
                }
                return Ok(v);
            }
        };
        self.consumed += k as u64;
        Ok(v)
    }

    /// Reads `k` bits into an arbitrary-precision integer, MSB first.
    pub fn next_bits_big(&mut self, k: u64) -> Result<BigUint, TapeExhausted> {
        let mut chunks = Vec::with_capacity((k / 32 + 1) as usize);
        let head = (k % 32) as u32;
        if head > 0 {
            chunks.push(self.next_bits(head)? as u32);
        }
        for _ in 0..k / 32 {
            chunks.push(self.next_bits(32)? as u32);
        }
        chunks.reverse();
        Ok(BigUint::new(chunks))
    }

    /// Uniform integer in `[0, m)`.
    ///
    /// Draws `ceil(log2 m)` bits and rejects values `>= m`. Powers of two
    /// never reject; `m = 1` consumes nothing.
    pub fn uniform_u64(&mut self, m: u64) -> Result<u64, TapeExhausted> {
        assert!(m >= 1, "uniform range must be non-empty");
        let k = ceil_log2_u64(m);
        loop {
            let v = self.next_bits(k)?;
            if v < m {
                return Ok(v);
            }
        }
    }

    /// Uniform integer in `[0, m)` that keeps the leftover of a rejected
    /// draw instead of discarding it (the "fast dice roller").
    ///
    /// Expected cost is below `log2 m + 2` bits, against up to twice
    /// `ceil(log2 m)` for [`uniform_u64`](Self::uniform_u64). Powers of two
    /// read exactly the same bits as `uniform_u64`.
    pub fn uniform_recycling(&mut self, m: u64) -> Result<u64, TapeExhausted> {
        assert!(m >= 1, "uniform range must be non-empty");
        let m = m as u128;
        // c is uniform on [0, v).
        let (mut v, mut c) = (1u128, 0u128);
        loop {
            if v >= m {
                if c < m {
                    return Ok(c as u64);
                }
                v -= m;
                c -= m;
            }
            v <<= 1;
            c = (c << 1) | self.next_bit()? as u128;
        }
    }

    /// Arbitrary-precision counterpart of [`uniform_u64`](Self::uniform_u64).
    pub fn uniform_big(&mut self, m: &BigUint) -> Result<BigUint, TapeExhausted> {
        assert!(!m.is_zero(), "uniform range must be non-empty");
        if let Some(small) = to_u64(m) {
            return self.uniform_u64(small).map(BigUint::from);
        }
        let k = ceil_log2_big(m);
        loop {
            let v = self.next_bits_big(k)?;
            if &v < m {
                return Ok(v);
            }
        }
    }

    /// `true` with probability exactly `num / den`.
    ///
    /// Compares fresh random bits against the binary expansion of the
    /// ratio, stopping at the first differing position or as soon as the
    /// remaining expansion is zero. Expected cost is at most 2 bits;
    /// `0/d` and `d/d` cost nothing.
    pub fn bernoulli(&mut self, num: u64, den: u64) -> Result<bool, TapeExhausted> {
        assert!(den > 0 && num <= den, "probability must lie in [0, 1]");
        if num == 0 {
            return Ok(false);
        }
        if num == den {
            return Ok(true);
        }
        let den = den as u128;
        let mut rem = num as u128;
        loop {
            rem <<= 1;
            let digit = rem >= den;
            if digit {
                rem -= den;
            }
            let b = self.next_bit()?;
            if b != digit {
                // U < p exactly when the tape shows 0 where the expansion has 1.
                return Ok(digit);
            }
            if rem == 0 {
                return Ok(false);
            }
        }
    }

    /// Arbitrary-precision counterpart of [`bernoulli`](Self::bernoulli).
    pub fn bernoulli_big(&mut self, num: &BigUint, den: &BigUint) -> Result<bool, TapeExhausted> {
        assert!(
            !den.is_zero() && num <= den,
            "probability must lie in [0, 1]"
        );
        if let (Some(n), Some(d)) = (to_u64(num), to_u64(den)) {
            return self.bernoulli(n, d);
        }
        if num.is_zero() {
            return Ok(false);
        }
        if num == den {
            return Ok(true);
        }
        let mut rem = num.clone();
        loop {
            rem <<= 1u32;
            let digit = &rem >= den;
            if digit {
                rem -= den;
            }
            let b = self.next_bit()?;
            if b != digit {
                return Ok(digit);
            }
            if rem.is_zero() {
                return Ok(false);
            }
        }
    }
}

impl FromStr for BitTape {
    type Err = ParseTapeError;

    /// Parses a string of `0`/`1` characters; whitespace and `_` are ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' => {}
                c if c.is_whitespace() => {}
                c => return Err(ParseTapeError(c)),
            }
        }
        Ok(Self::from_bits(bits))
    }
}

/// `ceil(log2 m)` for `m >= 1`.
pub fn ceil_log2_u64(m: u64) -> u32 {
    debug_assert!(m >= 1);
    64 - (m - 1).leading_zeros()
}

/// `ceil(log2 m)` for `m >= 1`.
pub fn ceil_log2_big(m: &BigUint) -> u64 {
    debug_assert!(!m.is_zero());
    if m.is_one() {
        0
    } else {
        (m - 1u32).bits()
    }
}

pub(crate) fn to_u64(x: &BigUint) -> Option<u64> {
    let digits = x.iter_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => x.iter_u64_digits().next(),
        _ => None,
    }
}
