use serde::Serialize;

use super::SuccinctError;
use crate::randbits::ceil_log2_u64;
use crate::ErrorParam;

/// A `w`-bit weight cut down to its leading one plus `keep` significant bits.
///
/// `f` counts positions from the most significant end, so the first `f - 1`
/// of the `w` bits are zero. The leading one is implicit in `mantissa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncatedWeight {
    pub f: u32,
    pub mantissa: u64,
    pub mantissa_len: u32,
    pub zero: bool,
}

/// `ceil(log2(2/ε))`, the number of bits kept after the leading one.
pub fn kept_bits(eps: ErrorParam) -> Result<u32, SuccinctError> {
    let e = eps.half_power().ok_or(SuccinctError::NotPowerOfHalf(eps))?;
    Ok(e + 1)
}

/// Bits needed to store `f - 1`.
pub fn f_width(w: u32) -> u32 {
    ceil_log2_u64(w as u64)
}

pub fn truncate(x: u64, eps: ErrorParam, w: u32) -> Result<TruncatedWeight, SuccinctError> {
    let keep = kept_bits(eps)?;
    check_width(w)?;
    if w < 64 && x >> w != 0 {
        return Err(SuccinctError::WeightTooWide { value: x, w });
    }
    if x == 0 {
        return Ok(TruncatedWeight {
            f: 0,
            mantissa: 0,
            mantissa_len: 0,
            zero: true,
        });
    }
    let bitlen = 64 - x.leading_zeros();
    let mantissa_len = keep.min(bitlen - 1);
    let below = bitlen - 1 - mantissa_len;
    let mantissa = (x >> below) & low_mask(mantissa_len);
    Ok(TruncatedWeight {
        f: w - bitlen + 1,
        mantissa,
        mantissa_len,
        zero: false,
    })
}

pub(crate) fn check_width(w: u32) -> Result<(), SuccinctError> {
    if (1..=64).contains(&w) {
        Ok(())
    } else {
        Err(SuccinctError::BadWidth(w))
    }
}

fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl TruncatedWeight {
    /// Number of significant bits of the original value.
    pub fn bit_length(&self, w: u32) -> u32 {
        if self.zero {
            0
        } else {
            w - self.f + 1
        }
    }

    /// The value whose leading `f + mantissa_len` bits match the original
    /// and whose remaining bits are zero.
    pub fn reconstruct(&self, w: u32) -> u64 {
        if self.zero {
            return 0;
        }
        let bitlen = self.bit_length(w);
        let head = (1u64 << self.mantissa_len) | self.mantissa;
        head << (bitlen - 1 - self.mantissa_len)
    }

    /// Mantissa padded on the right to exactly `keep` bits, as stored.
    pub fn aligned_mantissa(&self, keep: u32) -> u64 {
        if self.mantissa_len == 0 {
            0
        } else {
            self.mantissa << (keep - self.mantissa_len)
        }
    }

    /// Inverse of [`aligned_mantissa`](Self::aligned_mantissa).
    pub fn from_stored(
        f: u32,
        aligned: u64,
        zero: bool,
        w: u32,
        keep: u32,
    ) -> Result<Self, SuccinctError> {
        if zero {
            return Ok(TruncatedWeight {
                f: 0,
                mantissa: 0,
                mantissa_len: 0,
                zero: true,
            });
        }
        if f == 0 || f > w {
            return Err(SuccinctError::Corrupt(format!(
                "msb position {f} outside 1..={w}"
            )));
        }
        let bitlen = w - f + 1;
        let mantissa_len = keep.min(bitlen - 1);
        let dropped = keep - mantissa_len;
        if aligned & low_mask(dropped) != 0 {
            return Err(SuccinctError::Corrupt(
                "mantissa has bits past the weight's end".into(),
            ));
        }
        let mantissa = if mantissa_len == 0 {
            0
        } else {
            aligned >> dropped
        };
        Ok(TruncatedWeight {
            f,
            mantissa,
            mantissa_len,
            zero: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(e: u32) -> ErrorParam {
        ErrorParam::power_of_half(e)
    }

    #[test]
    fn forty_five_quarter() {
        let t = truncate(45, eps(2), 6).unwrap();
        assert_eq!(t.f, 1);
        assert_eq!((t.mantissa, t.mantissa_len), (0b011, 3));
        assert_eq!(t.reconstruct(6), 44);
    }

    #[test]
    fn two_fifty_five_half() {
        let t = truncate(255, eps(1), 8).unwrap();
        assert_eq!(t.reconstruct(8), 224);
    }

    #[test]
    fn one_is_lossless() {
        for e in 1..8 {
            for w in [1, 5, 64] {
                let t = truncate(1, eps(e), w).unwrap();
                assert_eq!(t.f, w);
                assert_eq!(t.reconstruct(w), 1);
            }
        }
    }

    #[test]
    fn zero_flag() {
        let t = truncate(0, eps(3), 16).unwrap();
        assert!(t.zero);
        assert_eq!(t.reconstruct(16), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            truncate(64, eps(1), 6),
            Err(SuccinctError::WeightTooWide { .. })
        ));
        assert!(matches!(
            truncate(3, ErrorParam::new(1, 3).unwrap(), 6),
            Err(SuccinctError::NotPowerOfHalf(_))
        ));
        assert!(matches!(
            truncate(3, eps(1), 0),
            Err(SuccinctError::BadWidth(0))
        ));
    }

    #[test]
    fn full_width_values() {
        let t = truncate(u64::MAX, eps(8), 64).unwrap();
        assert_eq!(t.f, 1);
        assert_eq!(t.reconstruct(64), u64::MAX << (63 - 9));
    }

    #[test]
    fn stored_form_round_trips() {
        let keep = 4;
        for x in 0..300u64 {
            let t = truncate(x, eps(3), 9).unwrap();
            let back = TruncatedWeight::from_stored(t.f, t.aligned_mantissa(keep), t.zero, 9, keep)
                .unwrap();
            assert_eq!(back, t, "x={x}");
        }
    }

    #[test]
    fn loss_is_bounded_exhaustively() {
        for e in 1..=4 {
            for x in 1..2048u64 {
                let r = truncate(x, eps(e), 11).unwrap().reconstruct(11);
                assert!(r <= x);
                // x - r <= (ε/2) x
                assert!(((x - r) as u128) << (e + 1) <= x as u128, "x={x} e={e}");
            }
        }
    }
}
