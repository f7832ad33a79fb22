//! Arithmetic in `Z_{2^l}` for `1 <= l <= 64`, carried in `u64` words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// The ring `Z_{2^l}`. Values are always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    bit_length: u8,
}

impl Default for RingSpec {
    /// `l = 16`, the element width of the inner-product benchmark.
    fn default() -> Self {
        Self { bit_length: 16 }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_2^{}", self.bit_length)
    }
}

impl RingSpec {
    pub fn new(bit_length: u32) -> Result<Self> {
        if !(1..=64).contains(&bit_length) {
            return Err(domain(format!("ring bit length {bit_length} outside 1..=64")));
        }
        Ok(Self {
            bit_length: bit_length as u8,
        })
    }

    pub fn bit_length(self) -> u32 {
        u32::from(self.bit_length)
    }

    pub fn mask(self) -> u64 {
        if self.bit_length == 64 {
            u64::MAX
        } else {
            (1u64 << self.bit_length) - 1
        }
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u64 {
        v & self.mask()
    }

    pub fn contains(self, v: u64) -> bool {
        v <= self.mask()
    }

    pub fn check(self, v: u64) -> Result<u64> {
        if self.contains(v) {
            Ok(v)
        } else {
            Err(domain(format!("{v} is not an element of {self}")))
        }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        self.reduce(a.wrapping_add(b))
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.reduce(a.wrapping_sub(b))
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a.wrapping_mul(b))
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        self.reduce(a.wrapping_neg())
    }

    /// Serialized width of one element: `ceil(l / 8)` bytes.
    pub fn byte_width(self) -> usize {
        usize::from(self.bit_length).div_ceil(8)
    }

    /// Little-endian, `byte_width()` bytes.
    pub fn write_element(self, v: u64, out: &mut Vec<u8>) {
        out.extend_from_slice(&v.to_le_bytes()[..self.byte_width()]);
    }

    /// Reads one element from the front of `bytes`. Bits above `l` must be zero.
    pub fn read_element(self, bytes: &[u8]) -> Result<u64> {
        let w = self.byte_width();
        if bytes.len() < w {
            return Err(domain(format!("need {w} bytes for a ring element, got {}", bytes.len())));
        }
        let mut buf = [0u8; 8];
        buf[..w].copy_from_slice(&bytes[..w]);
        self.check(u64::from_le_bytes(buf))
    }
}

pub fn ring_add(a: u64, b: u64, spec: RingSpec) -> u64 {
    spec.add(a, b)
}

pub fn ring_sub(a: u64, b: u64, spec: RingSpec) -> u64 {
    spec.sub(a, b)
}

pub fn ring_mul(a: u64, b: u64, spec: RingSpec) -> u64 {
    spec.mul(a, b)
}
