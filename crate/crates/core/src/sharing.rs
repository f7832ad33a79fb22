//! Additive sharing over `Z_{2^l}` and XOR sharing over packed bit vectors.
//!
//! Party `i` shares `x` by drawing a mask `r`, keeping `x - r` (or `x ^ r`) and
//! sending `r` to its peer. Reconstruction adds (or XORs) the two shares.

use std::fmt;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ring::RingSpec;
use crate::rng::SeededRng;

/// One of the two parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartyId(u8);

impl PartyId {
    pub const P0: PartyId = PartyId(0);
    pub const P1: PartyId = PartyId(1);

    pub fn new(id: u8) -> Result<Self> {
        match id {
            0 | 1 => Ok(PartyId(id)),
            _ => Err(domain(format!("party id {id} is not 0 or 1"))),
        }
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    pub fn peer(self) -> PartyId {
        PartyId(1 - self.0)
    }

    pub fn both() -> [PartyId; 2] {
        [Self::P0, Self::P1]
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// One party's additive share.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithShare {
    pub value: u64,
    pub spec: RingSpec,
}

/// Packed bit vector, LSB-first within each 64-bit word. Pad bits past `len` are zero.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BitVector {
    bits: BitVec<u64, Lsb0>,
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[{self}]")
    }
}

/// Index 0 printed first.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits.iter().by_vals() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: BitVec::repeat(false, len),
        }
    }

    pub(crate) fn from_bitvec(mut bits: BitVec<u64, Lsb0>) -> Self {
        bits.set_uninitialized(false);
        Self { bits }
    }

    pub fn from_bools(bools: impl IntoIterator<Item = bool>) -> Self {
        Self::from_bitvec(bools.into_iter().collect())
    }

    /// The low `len` bits of `value`, bit `i` of the integer at index `i`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        Self::from_bools((0..len).map(|i| i < 64 && (value >> i) & 1 == 1))
    }

    /// Unpacks `len` bits from LSB-first bytes. Bits past `len` must be zero.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(domain(format!(
                "{} bytes cannot hold exactly {len} bits",
                bytes.len()
            )));
        }
        if len % 8 != 0 && bytes[bytes.len() - 1] >> (len % 8) != 0 {
            return Err(domain("non-zero pad bits in packed bit vector"));
        }
        let mut bits: BitVec<u64, Lsb0> = BitVec::with_capacity(len);
        bits.extend(bytes.view_bits::<Lsb0>()[..len].iter().by_vals());
        Ok(Self::from_bitvec(bits))
    }

    /// Packed LSB-first bytes, `ceil(len / 8)` of them.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words().iter().flat_map(|w| w.to_le_bytes()).collect();
        out.truncate(self.len().div_ceil(8));
        out
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.bits.set(i, v);
    }

    pub fn push(&mut self, v: bool) {
        self.bits.push(v);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().by_vals()
    }

    /// Backing words; pad bits of the last word are zero.
    pub fn words(&self) -> &[u64] {
        self.bits.as_raw_slice()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.words().iter().all(|&w| w == 0)
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(domain(format!(
                "bit vector length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let raw: Vec<u64> = self
            .words()
            .iter()
            .zip(other.words())
            .map(|(&a, &b)| op(a, b))
            .collect();
        let mut bits = BitVec::<u64, Lsb0>::from_vec(raw);
        bits.truncate(self.len());
        Ok(Self::from_bitvec(bits))
    }

    /// Word-at-a-time XOR.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a ^ b)
    }

    /// Word-at-a-time AND.
    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & b)
    }

    /// Interprets the vector as an unsigned integer (index 0 least significant)
    /// and compares it with `other` of the same length.
    pub fn cmp_unsigned(&self, other: &Self) -> Result<std::cmp::Ordering> {
        if self.len() != other.len() {
            return Err(domain("cannot compare bit vectors of different lengths"));
        }
        Ok(self.words().iter().rev().cmp(other.words().iter().rev()))
    }
}

/// One party's XOR share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolShare {
    pub bits: BitVector,
}

/// Shares `x` with an explicit mask: holder keeps `x - r`, peer gets `r`.
pub fn arith_share_with_mask(x: u64, r: u64, spec: RingSpec) -> Result<(ArithShare, ArithShare)> {
    spec.check(x)?;
    spec.check(r)?;
    Ok((
        ArithShare {
            value: spec.sub(x, r),
            spec,
        },
        ArithShare { value: r, spec },
    ))
}

/// Returns `(holder share, peer share)`.
pub fn arith_share(x: u64, spec: RingSpec, rng: &mut SeededRng) -> Result<(ArithShare, ArithShare)> {
    spec.check(x)?;
    let r = rng.ring_element(spec);
    arith_share_with_mask(x, r, spec)
}

pub fn arith_reconstruct(s0: ArithShare, s1: ArithShare) -> Result<u64> {
    if s0.spec != s1.spec {
        return Err(domain(format!(
            "shares live in different rings: {} vs {}",
            s0.spec, s1.spec
        )));
    }
    Ok(s0.spec.add(s0.value, s1.value))
}

pub fn bool_share_with_mask(x: &BitVector, r: &BitVector) -> Result<(BoolShare, BoolShare)> {
    Ok((
        BoolShare { bits: x.xor(r)? },
        BoolShare { bits: r.clone() },
    ))
}

/// Returns `(holder share, peer share)` with `holder ^ peer == x`.
pub fn bool_share(x: &BitVector, rng: &mut SeededRng) -> (BoolShare, BoolShare) {
    let r = rng.bits(x.len());
    bool_share_with_mask(x, &r).expect("mask drawn with matching length")
}

pub fn bool_reconstruct(s0: &BoolShare, s1: &BoolShare) -> Result<BitVector> {
    s0.bits.xor(&s1.bits)
}
