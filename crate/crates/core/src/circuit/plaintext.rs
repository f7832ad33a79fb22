use super::{Circuit, GateKind};
use crate::error::{domain, Result};

/// Reference evaluation on plain values, gate by gate in id order.
///
/// Values are elements of `c.ring()`; for Boolean circuits that is `{0, 1}`.
pub fn eval_plaintext(c: &Circuit, x0: &[u64], x1: &[u64]) -> Result<Vec<u64>> {
    let ring = c.ring();
    for (p, xs) in [x0, x1].into_iter().enumerate() {
        let want = c.inputs[p].len();
        if xs.len() != want {
            return Err(domain(format!("party {p} supplied {} inputs, circuit expects {want}", xs.len())));
        }
        for &v in xs {
            ring.check(v)?;
        }
    }
    let mut next = [0usize; 2];
    let mut wires = vec![0u64; c.len()];
    for g in c.gates() {
        let arg = |k: usize| wires[g.inputs[k].index()];
        let v = match g.kind {
            GateKind::InputP0 | GateKind::InputP1 => {
                let p = usize::from(g.kind == GateKind::InputP1);
                let v = [x0, x1][p][next[p]];
                next[p] += 1;
                v
            }
            GateKind::ConstZero => 0,
            GateKind::ConstOne => 1,
            GateKind::Add | GateKind::Xor => ring.add(arg(0), arg(1)),
            GateKind::Mul | GateKind::And => ring.mul(arg(0), arg(1)),
            GateKind::Not => arg(0) ^ 1,
            GateKind::Output => arg(0),
        };
        wires[g.id.index()] = v;
    }
    Ok(c.outputs().iter().map(|o| wires[o.index()]).collect())
}

#[cfg(test)]
mod tests {
    use super::super::{build_inner_product, build_millionaire, millionaire_inputs, MillionaireVariant};
    use super::*;
    use crate::ring::RingSpec;
    use crate::sharing::BitVector;

    #[test]
    fn inner_product_oracle() {
        let c = build_inner_product(2, RingSpec::default()).unwrap();
        assert_eq!(eval_plaintext(&c, &[3, 5], &[7, 11]).unwrap(), vec![76]);
        assert_eq!(240_000u64 % 65_536, 43392);
        assert_eq!(eval_plaintext(&c, &[60000, 60000], &[2, 2]).unwrap(), vec![43392]);
        assert!(eval_plaintext(&c, &[1], &[1, 2]).is_err());
        assert!(eval_plaintext(&c, &[65536, 0], &[1, 2]).is_err());
    }

    #[test]
    fn millionaire_examples() {
        for v in [MillionaireVariant::Ripple, MillionaireVariant::Tree] {
            let c = build_millionaire(4, v).unwrap();
            let run = |x: u64, y: u64| {
                eval_plaintext(
                    &c,
                    &millionaire_inputs(&BitVector::from_u64(x, 4)),
                    &millionaire_inputs(&BitVector::from_u64(y, 4)),
                )
                .unwrap()[0]
            };
            assert_eq!(run(5, 3), 1);
            assert_eq!(run(3, 5), 0);
            assert_eq!(run(9, 9), 0);
        }
    }

    #[test]
    fn millionaire_exhaustive_both_variants_agree() {
        for n in 1..=8usize {
            let r = build_millionaire(n, MillionaireVariant::Ripple).unwrap();
            let t = build_millionaire(n, MillionaireVariant::Tree).unwrap();
            for x in 0..1u64 << n {
                let xi = millionaire_inputs(&BitVector::from_u64(x, n));
                for y in 0..1u64 << n {
                    let yi = millionaire_inputs(&BitVector::from_u64(y, n));
                    let want = u64::from(x > y);
                    assert_eq!(eval_plaintext(&r, &xi, &yi).unwrap(), vec![want]);
                    assert_eq!(eval_plaintext(&t, &xi, &yi).unwrap(), vec![want]);
                }
            }
        }
    }
}
