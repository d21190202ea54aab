//! The error parameter `ε`, kept as an exact reduced fraction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("epsilon must be written as num/den, got {0:?}")]
    Syntax(String),
    #[error("epsilon must satisfy 0 < num/den < 1, got {num}/{den}")]
    OutOfRange { num: u64, den: u64 },
}

/// An error parameter `0 < num/den < 1`.
///
/// Comparisons against `ε` are always done by integer cross-multiplication,
/// never in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ErrorParam {
    num: u64,
    den: u64,
}

impl ErrorParam {
    pub fn new(num: u64, den: u64) -> Result<Self, ParamError> {
        if num == 0 || den == 0 || num >= den {
            return Err(ParamError::OutOfRange { num, den });
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// `ε = 2^-exp`.
    pub fn power_of_half(exp: u32) -> Self {
        assert!((1..64).contains(&exp));
        Self {
            num: 1,
            den: 1 << exp,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `Some(k)` when `ε = 2^-k`.
    pub fn half_power(&self) -> Option<u32> {
        (self.num == 1 && self.den.is_power_of_two()).then(|| self.den.trailing_zeros())
    }

    /// `Some(m)` when `1/ε = m` is an integer.
    pub fn inverse(&self) -> Option<u64> {
        (self.num == 1).then_some(self.den)
    }

    /// `value < bound / ε`, evaluated as `value * num < bound * den`.
    pub fn below_scaled(&self, value: &BigUint, bound: &BigUint) -> bool {
        value * self.num < bound * self.den
    }

    /// `value <= ε * total`.
    pub fn at_most_fraction_of(&self, value: &BigUint, total: &BigUint) -> bool {
        value * self.den <= total * self.num
    }

    /// Smallest `k` with `2^k >= bound / ε`.
    pub fn log2_ceil_scaled(&self, bound: &BigUint) -> u64 {
        let target = bound * self.den;
        let mut k = 0u64;
        let mut pow = BigUint::from(self.num);
        while pow < target {
            pow <<= 1u32;
            k += 1;
        }
        k
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }
}

impl fmt::Display for ErrorParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ErrorParam {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| ParamError::Syntax(s.to_string()))?;
        let num = n
            .trim()
            .parse()
            .map_err(|_| ParamError::Syntax(s.to_string()))?;
        let den = d
            .trim()
            .parse()
            .map_err(|_| ParamError::Syntax(s.to_string()))?;
        Self::new(num, den)
    }
}
