//! Insecure trusted dealer for multiplication triples.
//!
//! Stands in for the cryptographic offline phase so the online phase can be
//! measured on its own. The dealer knows every triple in the clear; nothing
//! produced here is private.

use std::io::{BufRead, Write};

use crate::circuit::{Circuit, World};
use crate::error::{domain, Error, Result};
use crate::ring::RingSpec;
use crate::rng::{SeededRng, DEALER_LANE};

/// One party's additive shares of `(a, b, c)` with `c = a * b mod 2^l` across both parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// One party's XOR shares of 64 Boolean triples packed bit-parallel; `c = a & b` per bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BoolTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// A single-owner pool with a cursor. Each triple is handed out at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriplePool {
    Arith {
        ring: RingSpec,
        items: Vec<ArithTriple>,
        cursor: usize,
    },
    Bool {
        words: Vec<BoolTriple>,
        len: usize,
        cursor: usize,
    },
}

impl TriplePool {
    pub fn empty(world: World, ring: RingSpec) -> Self {
        match world {
            World::Arithmetic => TriplePool::Arith {
                ring,
                items: Vec::new(),
                cursor: 0,
            },
            World::Boolean => TriplePool::Bool {
                words: Vec::new(),
                len: 0,
                cursor: 0,
            },
        }
    }

    pub fn world(&self) -> World {
        match self {
            TriplePool::Arith { .. } => World::Arithmetic,
            TriplePool::Bool { .. } => World::Boolean,
        }
    }

    /// Total number of triples (bits for Boolean pools).
    pub fn len(&self) -> usize {
        match self {
            TriplePool::Arith { items, .. } => items.len(),
            TriplePool::Bool { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cursor(&self) -> usize {
        match self {
            TriplePool::Arith { cursor, .. } | TriplePool::Bool { cursor, .. } => *cursor,
        }
    }

    pub fn remaining(&self) -> usize {
        self.len() - self.cursor()
    }

    /// Fails without consuming anything unless `n` triples are left.
    pub fn reserve(&self, n: usize) -> Result<()> {
        if n > self.remaining() {
            return Err(Error::TripleExhausted {
                requested: n,
                available: self.remaining(),
            });
        }
        Ok(())
    }

    pub fn take_arith(&mut self) -> Result<ArithTriple> {
        self.reserve(1)?;
        match self {
            TriplePool::Arith { items, cursor, .. } => {
                *cursor += 1;
                Ok(items[*cursor - 1])
            }
            TriplePool::Bool { .. } => Err(domain("arithmetic triple requested from a Boolean pool")),
        }
    }

    /// Next Boolean triple share as `(a, b, c)` bits.
    pub fn take_bool(&mut self) -> Result<(bool, bool, bool)> {
        self.reserve(1)?;
        match self {
            TriplePool::Bool { words, cursor, .. } => {
                let w = words[*cursor / 64];
                let s = *cursor % 64;
                *cursor += 1;
                Ok(((w.a >> s) & 1 == 1, (w.b >> s) & 1 == 1, (w.c >> s) & 1 == 1))
            }
            TriplePool::Arith { .. } => Err(domain("Boolean triple requested from an arithmetic pool")),
        }
    }
}

pub fn deal_arith_triples(count: usize, spec: RingSpec, seed: u64) -> (TriplePool, TriplePool) {
    let mut rng = SeededRng::derive(seed, "triples/arith", DEALER_LANE);
    let mut p0 = Vec::with_capacity(count);
    let mut p1 = Vec::with_capacity(count);
    for _ in 0..count {
        let a = rng.ring_element(spec);
        let b = rng.ring_element(spec);
        let c = spec.mul(a, b);
        let s0 = ArithTriple {
            a: rng.ring_element(spec),
            b: rng.ring_element(spec),
            c: rng.ring_element(spec),
        };
        p1.push(ArithTriple {
            a: spec.sub(a, s0.a),
            b: spec.sub(b, s0.b),
            c: spec.sub(c, s0.c),
        });
        p0.push(s0);
    }
    let pool = |items| TriplePool::Arith {
        ring: spec,
        items,
        cursor: 0,
    };
    (pool(p0), pool(p1))
}

pub fn deal_bool_triples(bit_count: usize, seed: u64) -> (TriplePool, TriplePool) {
    let mut rng = SeededRng::derive(seed, "triples/bool", DEALER_LANE);
    let n_words = bit_count.div_ceil(64);
    let mut p0 = Vec::with_capacity(n_words);
    let mut p1 = Vec::with_capacity(n_words);
    for w in 0..n_words {
        let mask = if w + 1 == n_words && bit_count % 64 != 0 {
            (1u64 << (bit_count % 64)) - 1
        } else {
            u64::MAX
        };
        let a = rng.next_u64() & mask;
        let b = rng.next_u64() & mask;
        let c = a & b;
        let s0 = BoolTriple {
            a: rng.next_u64() & mask,
            b: rng.next_u64() & mask,
            c: rng.next_u64() & mask,
        };
        p1.push(BoolTriple {
            a: a ^ s0.a,
            b: b ^ s0.b,
            c: c ^ s0.c,
        });
        p0.push(s0);
    }
    let pool = |words| TriplePool::Bool {
        words,
        len: bit_count,
        cursor: 0,
    };
    (pool(p0), pool(p1))
}

/// Triples one evaluation of a circuit consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleBudget {
    pub arith: usize,
    pub bool: usize,
}

pub fn budget_for(c: &Circuit) -> TripleBudget {
    let n = c.count_interactive();
    TripleBudget {
        arith: n.mul,
        bool: n.and,
    }
}

/// Deals both parties' pools for `reps` evaluations of `c`.
pub fn deal_for(c: &Circuit, reps: usize, seed: u64) -> (TriplePool, TriplePool) {
    let b = budget_for(c);
    match c.world() {
        World::Arithmetic => deal_arith_triples(b.arith * reps, c.ring(), seed),
        World::Boolean => deal_bool_triples(b.bool * reps, seed),
    }
}

/// Writes `TRIP v1 <A|B> <l> <count>\n` followed by fixed-width little-endian
/// `(a, b, c)` records: `ceil(l/8)` bytes per share for arithmetic pools, one
/// `u64` per share for each 64-triple word of a Boolean pool. The cursor is not stored.
pub fn write_pool(pool: &TriplePool, mut out: impl Write) -> Result<()> {
    match pool {
        TriplePool::Arith { ring, items, .. } => {
            writeln!(out, "TRIP v1 A {} {}", ring.bit_length(), items.len())?;
            let mut buf = Vec::with_capacity(items.len() * 3 * ring.byte_width());
            for t in items {
                for v in [t.a, t.b, t.c] {
                    ring.write_element(v, &mut buf);
                }
            }
            out.write_all(&buf)?;
        }
        TriplePool::Bool { words, len, .. } => {
            writeln!(out, "TRIP v1 B 1 {len}")?;
            for w in words {
                for v in [w.a, w.b, w.c] {
                    out.write_all(&v.to_le_bytes())?;
                }
            }
        }
    }
    Ok(())
}

pub fn read_pool(mut input: impl BufRead) -> Result<TriplePool> {
    let mut header = String::new();
    input.read_line(&mut header)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad = || Error::Protocol(format!("bad triple file header `{}`", header.trim_end()));
    let [magic, version, world, l, count] = fields[..] else {
        return Err(bad());
    };
    if magic != "TRIP" || version != "v1" {
        return Err(bad());
    }
    let l: u32 = l.parse().map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    let mut body = Vec::new();
    input.read_to_end(&mut body)?;
    match world {
        "A" => {
            let ring = RingSpec::new(l)?;
            let w = ring.byte_width();
            if body.len() != count * 3 * w {
                return Err(Error::Protocol(format!(
                    "triple file body is {} bytes, expected {}",
                    body.len(),
                    count * 3 * w
                )));
            }
            let mut items = Vec::with_capacity(count);
            for rec in body.chunks_exact(3 * w) {
                items.push(ArithTriple {
                    a: ring.read_element(&rec[..w])?,
                    b: ring.read_element(&rec[w..2 * w])?,
                    c: ring.read_element(&rec[2 * w..])?,
                });
            }
            Ok(TriplePool::Arith {
                ring,
                items,
                cursor: 0,
            })
        }
        "B" if l == 1 => {
            let n_words = count.div_ceil(64);
            if body.len() != n_words * 24 {
                return Err(Error::Protocol(format!(
                    "triple file body is {} bytes, expected {}",
                    body.len(),
                    n_words * 24
                )));
            }
            let word = |b: &[u8]| u64::from_le_bytes(b.try_into().expect("8-byte chunk"));
            let words = body
                .chunks_exact(24)
                .map(|r| BoolTriple {
                    a: word(&r[..8]),
                    b: word(&r[8..16]),
                    c: word(&r[16..]),
                })
                .collect();
            Ok(TriplePool::Bool {
                words,
                len: count,
                cursor: 0,
            })
        }
        _ => Err(bad()),
    }
}
