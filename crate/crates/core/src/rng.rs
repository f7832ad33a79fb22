//! Deterministic randomness for masks, triples and benchmark inputs.
//!
//! **Not cryptographically secure.** Every stream is a Xoshiro256++ generator
//! seeded through SplitMix64, chosen so that identical seeds give identical
//! transcripts. Nothing here should be used to protect real secrets.
//!
//! Independent streams are derived from one root seed with [`sub_seed`]:
//!
//! ```text
//! sub_seed(root, label, lane) = mix64(mix64(root ^ fnv1a64(label)) ^ mix64(lane + GOLDEN))
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer and `GOLDEN = 0x9E37_79B9_7F4A_7C15`.
//! `lane` is the party id (0 or 1) or [`DEALER_LANE`].

use bitvec::prelude::*;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::ring::RingSpec;
use crate::sharing::BitVector;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Lane used by the trusted dealer, disjoint from both party ids.
pub const DEALER_LANE: u64 = 0xDEA1;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xCBF2_9CE4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Derives a labeled child seed. Distinct `(label, lane)` pairs give unrelated streams.
pub fn sub_seed(root: u64, label: &str, lane: u64) -> u64 {
    mix64(mix64(root ^ fnv1a64(label.as_bytes())) ^ mix64(lane.wrapping_add(GOLDEN)))
}

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    position: u64,
    inner: Xoshiro256PlusPlus,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            position: 0,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Stream for `label` on `lane`, derived from `root`.
    pub fn derive(root: u64, label: &str, lane: u64) -> Self {
        Self::new(sub_seed(root, label, lane))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn next_u64(&mut self) -> u64 {
        self.position += 1;
        self.inner.next_u64()
    }

    /// Uniform element of `Z_{2^l}`.
    pub fn ring_element(&mut self, spec: RingSpec) -> u64 {
        spec.reduce(self.next_u64())
    }

    pub fn bit(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// Uniform bit vector of `len` bits, pad bits cleared.
    pub fn bits(&mut self, len: usize) -> BitVector {
        let words = len.div_ceil(64);
        let mut raw: Vec<u64> = (0..words).map(|_| self.next_u64()).collect();
        if len % 64 != 0 {
            if let Some(last) = raw.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        let mut bv = BitVec::<u64, Lsb0>::from_vec(raw);
        bv.truncate(len);
        BitVector::from_bitvec(bv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededRng::new(42);
        let mut b = SeededRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_eq!(a.position(), 100);
    }

    #[test]
    fn labels_and_lanes_separate_streams() {
        let s = [
            sub_seed(1, "input", 0),
            sub_seed(1, "input", 1),
            sub_seed(1, "triples", 0),
            sub_seed(2, "input", 0),
            sub_seed(1, "triples", DEALER_LANE),
        ];
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                assert_ne!(s[i], s[j]);
            }
        }
        assert_eq!(sub_seed(1, "input", 0), sub_seed(1, "input", 0));
    }

    #[test]
    fn bits_clear_padding() {
        let mut rng = SeededRng::new(3);
        let v = rng.bits(70);
        assert_eq!(v.len(), 70);
        assert_eq!(v.words()[1] >> 6, 0);
    }

    #[test]
    fn ring_elements_are_reduced() {
        let spec = RingSpec::new(5).unwrap();
        let mut rng = SeededRng::new(11);
        assert!((0..1000).all(|_| rng.ring_element(spec) < 32));
    }
}
