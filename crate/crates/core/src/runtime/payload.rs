//! LAYER_DATA and INPUT_SHARE payload encodings.
//!
//! Layer payload order: `d, e` for each MUL/AND gate in ascending id order,
//! then one share per OUTPUT gate. Arithmetic values take `ceil(l/8)` bytes
//! little-endian; Boolean values are packed one bit each, LSB-first, with the
//! final byte zero-padded.

use crate::circuit::World;
use crate::error::{protocol, Result};
use crate::ring::RingSpec;
use crate::sharing::BitVector;

/// One party's contribution to a layer exchange.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayerPayload {
    /// Masked operands `(x - a, y - b)` per multiplication gate.
    pub masked: Vec<(u64, u64)>,
    pub outputs: Vec<u64>,
}

impl LayerPayload {
    fn flat(&self) -> impl Iterator<Item = u64> + '_ {
        self.masked
            .iter()
            .flat_map(|&(d, e)| [d, e])
            .chain(self.outputs.iter().copied())
    }

    pub fn encode(&self, world: World, ring: RingSpec) -> Vec<u8> {
        encode_values(self.flat(), world, ring)
    }

    pub fn decode(bytes: &[u8], world: World, ring: RingSpec, n_masked: usize, n_outputs: usize) -> Result<Self> {
        let v = decode_values(bytes, world, ring, 2 * n_masked + n_outputs)?;
        let masked = v[..2 * n_masked].chunks_exact(2).map(|c| (c[0], c[1])).collect();
        Ok(Self {
            masked,
            outputs: v[2 * n_masked..].to_vec(),
        })
    }
}

pub fn encode_values(values: impl Iterator<Item = u64>, world: World, ring: RingSpec) -> Vec<u8> {
    match world {
        World::Arithmetic => {
            let mut out = Vec::new();
            for v in values {
                ring.write_element(v, &mut out);
            }
            out
        }
        World::Boolean => BitVector::from_bools(values.map(|v| v & 1 == 1)).to_bytes(),
    }
}

/// Decodes exactly `count` values; any other payload length is a protocol error.
pub fn decode_values(bytes: &[u8], world: World, ring: RingSpec, count: usize) -> Result<Vec<u64>> {
    let expected = match world {
        World::Arithmetic => count * ring.byte_width(),
        World::Boolean => count.div_ceil(8),
    };
    if bytes.len() != expected {
        return Err(protocol(format!(
            "payload is {} bytes, gate schedule expects {expected}",
            bytes.len()
        )));
    }
    match world {
        World::Arithmetic => bytes
            .chunks_exact(ring.byte_width())
            .map(|c| ring.read_element(c).map_err(|e| protocol(e.to_string())))
            .collect(),
        World::Boolean => {
            let bits = BitVector::from_bytes(bytes, count).map_err(|e| protocol(e.to_string()))?;
            Ok(bits.iter().map(u64::from).collect())
        }
    }
}

pub fn encode_layer_payload(p: &LayerPayload, world: World, ring: RingSpec) -> Vec<u8> {
    p.encode(world, ring)
}

pub fn decode_layer_payload(
    bytes: &[u8],
    world: World,
    ring: RingSpec,
    n_masked: usize,
    n_outputs: usize,
) -> Result<LayerPayload> {
    LayerPayload::decode(bytes, world, ring, n_masked, n_outputs)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::error::Error;

    #[test]
    fn empty_layer() {
        let p = LayerPayload::default();
        assert!(p.encode(World::Arithmetic, RingSpec::default()).is_empty());
        assert!(p.encode(World::Boolean, RingSpec::new(1).unwrap()).is_empty());
    }

    #[test]
    fn one_mul_l16() {
        let p = LayerPayload {
            masked: vec![(1, 65534)],
            outputs: vec![],
        };
        assert_eq!(p.encode(World::Arithmetic, RingSpec::default()), vec![0x01, 0x00, 0xFE, 0xFF]);
    }

    #[test]
    fn boolean_packing_order() {
        // d0=1 e0=0 d1=1 e1=1 out=1 -> bits 1,0,1,1,1 -> 0b11101
        let p = LayerPayload {
            masked: vec![(1, 0), (1, 1)],
            outputs: vec![1],
        };
        let bytes = p.encode(World::Boolean, RingSpec::new(1).unwrap());
        assert_eq!(bytes, vec![0b1_1101]);
    }

    #[test]
    fn length_mismatch_is_protocol_error() {
        let r = LayerPayload::decode(&[1, 2, 3], World::Arithmetic, RingSpec::default(), 1, 0);
        assert!(matches!(r, Err(Error::Protocol(_))));
        let r = LayerPayload::decode(&[0xFF], World::Boolean, RingSpec::new(1).unwrap(), 1, 1);
        assert!(matches!(r, Err(Error::Protocol(_))));
    }

    fn payload(max: u64) -> impl Strategy<Value = LayerPayload> {
        (
            prop::collection::vec((0..=max, 0..=max), 0..40),
            prop::collection::vec(0..=max, 0..5),
        )
            .prop_map(|(masked, outputs)| LayerPayload { masked, outputs })
    }

    proptest! {
        #[test]
        fn arith_round_trip(l in 1u32..=64, p in payload(u64::MAX)) {
            let ring = RingSpec::new(l).unwrap();
            let p = LayerPayload {
                masked: p.masked.iter().map(|&(d, e)| (ring.reduce(d), ring.reduce(e))).collect(),
                outputs: p.outputs.iter().map(|&o| ring.reduce(o)).collect(),
            };
            let bytes = p.encode(World::Arithmetic, ring);
            let back = LayerPayload::decode(&bytes, World::Arithmetic, ring, p.masked.len(), p.outputs.len()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn bool_round_trip(p in payload(1)) {
            let ring = RingSpec::new(1).unwrap();
            let bytes = p.encode(World::Boolean, ring);
            let back = LayerPayload::decode(&bytes, World::Boolean, ring, p.masked.len(), p.outputs.len()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
