//! The `SSMP` index file.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "SSMP"
//!      4     1  version (1)
//!      5     1  mode (1 multiplicative, 2 additive)
//!      6     8  n
//!     14     2  w
//!     16     8  ε numerator
//!     24     8  ε denominator
//!     32     8  payload length in bytes
//!     40     …  payload
//!      …     4  CRC32 of everything before it
//! ```
//!
//! All integers are little-endian. Payload arrays are packed MSB-first and
//! each starts on a byte boundary.
//!
//! Multiplicative payload, per item: `f - 1` in `ceil(log2 w)` bits, the
//! mantissa left-aligned in `ceil(log2(2/ε))` bits, a zero flag, and the
//! alias pointer in `ceil(log2(n+1))` bits (0 for none, else item + 1).
//! Cut values are not stored; loading recomputes them from the alias forest.
//!
//! Additive payload: the `1/ε` slot items in `ceil(log2 n)` bits each.

use super::truncate::{f_width, kept_bits, TruncatedWeight};
use super::{AdditiveTable, MultIndex, SuccinctError, SuccinctIndex};
use crate::randbits::ceil_log2_u64;
use crate::ErrorParam;

pub const MAGIC: &[u8; 4] = b"SSMP";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 40;
const MODE_MULT: u8 = 1;
const MODE_ADD: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("unsupported format version {0}")]
    BadVersion(u8),
    #[error("file is truncated")]
    TruncatedFile,
    #[error("checksum mismatch")]
    ChecksumMismatch,
    #[error("unknown mode {0}")]
    BadMode(u8),
    #[error("invalid index contents: {0}")]
    Invalid(String),
}

struct BitWriter {
    bytes: Vec<u8>,
    acc: u8,
    filled: u32,
}

impl BitWriter {
    fn new() -> Self {
        Self {
            bytes: Vec::new(),
            acc: 0,
            filled: 0,
        }
    }

    fn put(&mut self, value: u64, width: u32) {
        for k in (0..width).rev() {
            self.acc = (self.acc << 1) | ((value >> k) & 1) as u8;
            self.filled += 1;
            if self.filled == 8 {
                self.bytes.push(self.acc);
                self.acc = 0;
                self.filled = 0;
            }
        }
    }

    fn align(&mut self) {
        if self.filled > 0 {
            self.bytes.push(self.acc << (8 - self.filled));
            self.acc = 0;
            self.filled = 0;
        }
    }

    fn finish(mut self) -> Vec<u8> {
        self.align();
        self.bytes
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn get(&mut self, width: u32) -> Result<u64, FormatError> {
        let mut v = 0u64;
        for _ in 0..width {
            let byte = *self
                .bytes
                .get(self.pos / 8)
                .ok_or(FormatError::TruncatedFile)?;
            let bit = (byte >> (7 - self.pos % 8)) & 1;
            v = (v << 1) | bit as u64;
            self.pos += 1;
        }
        Ok(v)
    }

    fn align(&mut self) {
        self.pos = self.pos.div_ceil(8) * 8;
    }

    fn at_end(&self) -> bool {
        self.pos == self.bytes.len() * 8
    }
}

fn alias_width(n: usize) -> u32 {
    ceil_log2_u64(n as u64 + 1)
}

fn slot_width(n: usize) -> u32 {
    ceil_log2_u64(n as u64)
}

fn mult_payload(idx: &MultIndex) -> Vec<u8> {
    let w = idx.width();
    let keep = kept_bits(idx.eps()).expect("built index has a power-of-half ε");
    let fw = f_width(w);
    let mut out = BitWriter::new();
    for t in idx.truncated() {
        out.put(if t.zero { 0 } else { (t.f - 1) as u64 }, fw);
    }
    out.align();
    for t in idx.truncated() {
        out.put(t.aligned_mantissa(keep), keep);
    }
    out.align();
    for t in idx.truncated() {
        out.put(t.zero as u64, 1);
    }
    out.align();
    let aw = alias_width(idx.len());
    for b in idx.table().buckets() {
        out.put(b.alias.map_or(0, |a| a as u64 + 1), aw);
    }
    out.finish()
}

fn add_payload(t: &AdditiveTable) -> Vec<u8> {
    let sw = slot_width(t.len());
    let mut out = BitWriter::new();
    for &i in t.slots() {
        out.put(i as u64, sw);
    }
    out.finish()
}

impl SuccinctIndex {
    fn payload(&self) -> Vec<u8> {
        match self {
            SuccinctIndex::Mult(idx) => mult_payload(idx),
            SuccinctIndex::Add(t) => add_payload(t),
        }
    }

    /// Size of the serialized payload, excluding header and checksum.
    pub fn payload_bits(&self) -> u64 {
        self.payload().len() as u64 * 8
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let (mode, w) = match self {
            SuccinctIndex::Mult(idx) => (MODE_MULT, idx.width()),
            SuccinctIndex::Add(_) => (MODE_ADD, 0),
        };
        let (n, eps, payload) = (self.len(), self.eps(), self.payload());
        let mut out = Vec::with_capacity(HEADER_LEN + payload.len() + 4);
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(mode);
        out.extend_from_slice(&(n as u64).to_le_bytes());
        out.extend_from_slice(&(w as u16).to_le_bytes());
        out.extend_from_slice(&eps.num().to_le_bytes());
        out.extend_from_slice(&eps.den().to_le_bytes());
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&payload);
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(FormatError::BadMagic);
        }
        if bytes.len() < 5 {
            return Err(FormatError::TruncatedFile);
        }
        if bytes[4] != VERSION {
            return Err(FormatError::BadVersion(bytes[4]));
        }
        if bytes.len() < HEADER_LEN {
            return Err(FormatError::TruncatedFile);
        }
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let mode = bytes[5];
        let n = u64_at(6);
        let w = u16::from_le_bytes([bytes[14], bytes[15]]) as u32;
        let (num, den) = (u64_at(16), u64_at(24));
        let payload_len = u64_at(32);
        let body_end = (HEADER_LEN as u64)
            .checked_add(payload_len)
            .filter(|&e| e <= bytes.len() as u64)
            .ok_or(FormatError::TruncatedFile)? as usize;
        if bytes.len() < body_end + 4 {
            return Err(FormatError::TruncatedFile);
        }
        if bytes.len() > body_end + 4 {
            return Err(FormatError::Invalid("trailing bytes after checksum".into()));
        }
        let stored = u32::from_le_bytes(bytes[body_end..].try_into().unwrap());
        if crc32fast::hash(&bytes[..body_end]) != stored {
            return Err(FormatError::ChecksumMismatch);
        }
        let eps = ErrorParam::new(num, den).map_err(|e| FormatError::Invalid(e.to_string()))?;
        let n =
            usize::try_from(n).map_err(|_| FormatError::Invalid("item count too large".into()))?;
        let payload = &bytes[HEADER_LEN..body_end];
        let index = match mode {
            MODE_MULT => SuccinctIndex::Mult(read_mult(payload, n, w, eps)?),
            MODE_ADD => SuccinctIndex::Add(read_add(payload, n, eps)?),
            other => return Err(FormatError::BadMode(other)),
        };
        Ok(index)
    }
}

fn invalid(e: SuccinctError) -> FormatError {
    FormatError::Invalid(e.to_string())
}

fn read_mult(payload: &[u8], n: usize, w: u32, eps: ErrorParam) -> Result<MultIndex, FormatError> {
    super::truncate::check_width(w).map_err(invalid)?;
    let keep = kept_bits(eps).map_err(invalid)?;
    let fw = f_width(w);
    let mut r = BitReader::new(payload);
    let mut fs = Vec::with_capacity(n);
    for _ in 0..n {
        fs.push(r.get(fw)? as u32 + 1);
    }
    r.align();
    let mut mantissas = Vec::with_capacity(n);
    for _ in 0..n {
        mantissas.push(r.get(keep)?);
    }
    r.align();
    let mut zeros = Vec::with_capacity(n);
    for _ in 0..n {
        zeros.push(r.get(1)? == 1);
    }
    r.align();
    let aw = alias_width(n);
    let mut aliases = Vec::with_capacity(n);
    for _ in 0..n {
        let a = r.get(aw)?;
        aliases.push(if a == 0 { None } else { Some(a as usize - 1) });
    }
    r.align();
    if !r.at_end() {
        return Err(FormatError::Invalid(
            "payload longer than its arrays".into(),
        ));
    }
    let truncated = (0..n)
        .map(|i| {
            if zeros[i] && (fs[i] != 1 || mantissas[i] != 0) {
                return Err(FormatError::Invalid(format!(
                    "zero item {i} has stored bits"
                )));
            }
            TruncatedWeight::from_stored(fs[i], mantissas[i], zeros[i], w, keep).map_err(invalid)
        })
        .collect::<Result<Vec<_>, _>>()?;
    MultIndex::from_parts(w, eps, truncated, &aliases).map_err(invalid)
}

fn read_add(payload: &[u8], n: usize, eps: ErrorParam) -> Result<AdditiveTable, FormatError> {
    let m = eps
        .inverse()
        .ok_or_else(|| FormatError::Invalid("1/ε is not an integer".into()))?;
    if n == 0 {
        return Err(FormatError::Invalid("empty additive table".into()));
    }
    let sw = slot_width(n);
    let mut r = BitReader::new(payload);
    let mut slots = Vec::new();
    for _ in 0..m {
        slots.push(r.get(sw)? as usize);
    }
    r.align();
    if !r.at_end() {
        return Err(FormatError::Invalid(
            "payload longer than its slot array".into(),
        ));
    }
    AdditiveTable::from_slots(n, eps, slots).map_err(invalid)
}
