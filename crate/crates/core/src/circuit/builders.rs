use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitBuilder, GateId, World};
use crate::error::{domain, Error, Result};
use crate::ring::RingSpec;
use crate::sharing::{BitVector, PartyId};

/// `sum_i x_i * y_i mod 2^l`. P0 holds `x`, P1 holds `y`; the single output goes to both.
///
/// The products are summed with a balanced tree of local `ADD` gates.
pub fn build_inner_product(n: usize, spec: RingSpec) -> Result<Circuit> {
    if n == 0 {
        return Err(domain("inner product needs at least one element"));
    }
    let mut b = CircuitBuilder::new(World::Arithmetic, spec);
    let xs = (0..n).map(|_| b.input(PartyId::P0)).collect::<Result<Vec<_>>>()?;
    let ys = (0..n).map(|_| b.input(PartyId::P1)).collect::<Result<Vec<_>>>()?;
    let mut level = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| b.mul(x, y))
        .collect::<Result<Vec<_>>>()?;
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            next.push(match *pair {
                [l, r] => b.add(l, r)?,
                [odd] => odd,
                _ => unreachable!(),
            });
        }
        level = next;
    }
    b.output(level[0])?;
    b.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MillionaireVariant {
    /// Carry chain from the least significant bit: `n` ANDs, AND-depth `n`.
    Ripple,
    /// Balanced (GT, EQ) combiner tree: `3n - 2` ANDs, AND-depth `1 + ceil(log2 n)`.
    #[default]
    Tree,
}

impl MillionaireVariant {
    pub fn code(self) -> u8 {
        match self {
            MillionaireVariant::Ripple => 0,
            MillionaireVariant::Tree => 1,
        }
    }
}

impl fmt::Display for MillionaireVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MillionaireVariant::Ripple => "ripple",
            MillionaireVariant::Tree => "tree",
        })
    }
}

impl FromStr for MillionaireVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ripple" => Ok(Self::Ripple),
            "tree" => Ok(Self::Tree),
            other => Err(Error::Usage(format!("unknown millionaire variant `{other}`"))),
        }
    }
}

/// Boolean circuit with one output bit: `1` iff `x > y` as unsigned integers.
///
/// P0 inputs are the bits of `x`, P1 inputs the bits of `y`, least significant first.
pub fn build_millionaire(n_bits: usize, variant: MillionaireVariant) -> Result<Circuit> {
    if n_bits == 0 {
        return Err(domain("millionaire comparison needs at least one bit"));
    }
    let mut b = CircuitBuilder::new(World::Boolean, RingSpec::new(1)?);
    let xs = (0..n_bits).map(|_| b.input(PartyId::P0)).collect::<Result<Vec<_>>>()?;
    let ys = (0..n_bits).map(|_| b.input(PartyId::P1)).collect::<Result<Vec<_>>>()?;
    let gt = match variant {
        MillionaireVariant::Ripple => ripple(&mut b, &xs, &ys)?,
        MillionaireVariant::Tree => tree(&mut b, &xs, &ys)?.0,
    };
    b.output(gt)?;
    b.finish()
}

// gt_{i+1} = x_i ^ ((x_i ^ gt_i) & (y_i ^ gt_i)), gt_0 = 0
fn ripple(b: &mut CircuitBuilder, xs: &[GateId], ys: &[GateId]) -> Result<GateId> {
    let mut gt = b.constant(false)?;
    for (&x, &y) in xs.iter().zip(ys) {
        let xg = b.xor(x, gt)?;
        let yg = b.xor(y, gt)?;
        let t = b.and(xg, yg)?;
        gt = b.xor(x, t)?;
    }
    Ok(gt)
}

/// Returns `(gt, eq)` for the bit range; `xs[0]` is least significant.
fn tree(b: &mut CircuitBuilder, xs: &[GateId], ys: &[GateId]) -> Result<(GateId, GateId)> {
    if let ([x], [y]) = (xs, ys) {
        let ny = b.not(*y)?;
        let gt = b.and(*x, ny)?;
        let diff = b.xor(*x, *y)?;
        let eq = b.not(diff)?;
        return Ok((gt, eq));
    }
    // larger half on the low side keeps the GT path at exactly 1 + ceil(log2 n)
    let split = xs.len().div_ceil(2);
    let (gt_lo, eq_lo) = tree(b, &xs[..split], &ys[..split])?;
    let (gt_hi, eq_hi) = tree(b, &xs[split..], &ys[split..])?;
    let carry = b.and(eq_hi, gt_lo)?;
    let gt = b.xor(gt_hi, carry)?;
    let eq = b.and(eq_hi, eq_lo)?;
    Ok((gt, eq))
}

/// Plaintext input vectors for the millionaire circuit: one bit per input gate.
pub fn millionaire_inputs(x: &BitVector) -> Vec<u64> {
    x.iter().map(u64::from).collect()
}

#[cfg(test)]
mod tests {
    use super::super::{GateKind, InteractiveCounts};
    use super::*;

    #[test]
    fn inner_product_counts() {
        let c = build_inner_product(2, RingSpec::default()).unwrap();
        assert_eq!(c.count_kind(GateKind::InputP0) + c.count_kind(GateKind::InputP1), 4);
        assert_eq!(c.count_kind(GateKind::Mul), 2);
        assert_eq!(c.count_kind(GateKind::Add), 1);
        assert_eq!(c.count_kind(GateKind::Output), 1);

        let c = build_inner_product(128, RingSpec::default()).unwrap();
        assert_eq!(c.count_kind(GateKind::Mul), 128);
        assert_eq!(c.count_kind(GateKind::Add), 127);
        assert_eq!(c.count_interactive(), InteractiveCounts { mul: 128, and: 0, output: 1 });

        let c = build_inner_product(1, RingSpec::default()).unwrap();
        assert_eq!(c.count_kind(GateKind::Add), 0);
        assert!(build_inner_product(0, RingSpec::default()).is_err());
    }

    #[test]
    fn millionaire_counts() {
        for n in [1usize, 2, 3, 5, 8, 32, 33, 100] {
            let r = build_millionaire(n, MillionaireVariant::Ripple).unwrap();
            assert_eq!(r.count_kind(GateKind::And), n);
            let t = build_millionaire(n, MillionaireVariant::Tree).unwrap();
            assert_eq!(t.count_kind(GateKind::And), 3 * n - 2);
        }
        let t = build_millionaire(32, MillionaireVariant::Tree).unwrap();
        assert_eq!(t.count_interactive(), InteractiveCounts { mul: 0, and: 94, output: 1 });
        let r = build_millionaire(32, MillionaireVariant::Ripple).unwrap();
        assert_eq!(r.count_interactive(), InteractiveCounts { mul: 0, and: 32, output: 1 });
        assert!(build_millionaire(0, MillionaireVariant::Tree).is_err());
    }

    #[test]
    fn builds_are_deterministic() {
        assert_eq!(
            build_millionaire(37, MillionaireVariant::Tree).unwrap(),
            build_millionaire(37, MillionaireVariant::Tree).unwrap()
        );
        assert_eq!(
            build_inner_product(77, RingSpec::default()).unwrap(),
            build_inner_product(77, RingSpec::default()).unwrap()
        );
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("tree".parse::<MillionaireVariant>().unwrap(), MillionaireVariant::Tree);
        assert!("yao".parse::<MillionaireVariant>().is_err());
    }
}
