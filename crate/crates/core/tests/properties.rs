use hetero2pc::circuit::{eval_plaintext, Circuit, CircuitBuilder, World};
use hetero2pc::preprocessing::deal_for;
use hetero2pc::ring::RingSpec;
use hetero2pc::runtime::{run_loopback, LoopbackConfig};
use hetero2pc::sharing::PartyId;
use proptest::collection::vec;
use proptest::prelude::*;

type Op = (u8, usize, usize);

// Wires are picked modulo the current wire count, so any op list is a valid DAG.
// Constants are folded into an XOR so every wire stays reachable from an input.
fn random_circuit(world: World, l: u32, n_in: [usize; 2], ops: &[Op], n_out: usize) -> Circuit {
    let ring = match world {
        World::Arithmetic => RingSpec::new(l).unwrap(),
        World::Boolean => RingSpec::new(1).unwrap(),
    };
    let mut b = CircuitBuilder::new(world, ring);
    let mut w = Vec::new();
    for _ in 0..n_in[0] {
        w.push(b.input(PartyId::P0).unwrap());
    }
    for _ in 0..n_in[1] {
        w.push(b.input(PartyId::P1).unwrap());
    }
    for &(op, i, j) in ops {
        let (x, y) = (w[i % w.len()], w[j % w.len()]);
        let g = match (world, op % 4) {
            (World::Arithmetic, 0 | 1) => b.add(x, y),
            (World::Arithmetic, _) => b.mul(x, y),
            (World::Boolean, 0) => b.xor(x, y),
            (World::Boolean, 1) => b.not(x),
            (World::Boolean, 2) => {
                let k = b.constant(i % 2 == 1).unwrap();
                b.xor(k, y)
            }
            (World::Boolean, _) => b.and(x, y),
        };
        w.push(g.unwrap());
    }
    for k in 0..n_out {
        b.output(w[w.len() - 1 - k % w.len()]).unwrap();
    }
    b.finish().unwrap()
}

fn secure_matches_plaintext(c: &Circuit, seed: u64, x0: &[u64], x1: &[u64]) -> Result<(), TestCaseError> {
    let (mut p0, mut p1) = deal_for(c, 1, seed);
    let cfg = LoopbackConfig { seed, ..LoopbackConfig::default() };
    let run = run_loopback(c, [x0, x1], [&mut p0, &mut p1], &cfg).unwrap();
    let want = eval_plaintext(c, x0, x1).unwrap();
    prop_assert_eq!(&run.outputs[0], &want);
    prop_assert_eq!(&run.outputs[1], &want);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arithmetic_circuits_open_to_plaintext(
        l in 1u32..=64,
        ops in vec((any::<u8>(), any::<usize>(), any::<usize>()), 1..40),
        n_out in 1usize..4,
        seed: u64,
        x0 in vec(any::<u64>(), 1..4),
        x1 in vec(any::<u64>(), 1..4),
    ) {
        let c = random_circuit(World::Arithmetic, l, [x0.len(), x1.len()], &ops, n_out);
        let ring = RingSpec::new(l).unwrap();
        let x0: Vec<u64> = x0.iter().map(|&v| ring.reduce(v)).collect();
        let x1: Vec<u64> = x1.iter().map(|&v| ring.reduce(v)).collect();
        secure_matches_plaintext(&c, seed, &x0, &x1)?;
    }

    #[test]
    fn boolean_circuits_open_to_plaintext(
        ops in vec((any::<u8>(), any::<usize>(), any::<usize>()), 1..40),
        n_out in 1usize..4,
        seed: u64,
        x0 in vec(0u64..2, 1..4),
        x1 in vec(0u64..2, 1..4),
    ) {
        let c = random_circuit(World::Boolean, 1, [x0.len(), x1.len()], &ops, n_out);
        secure_matches_plaintext(&c, seed, &x0, &x1)?;
    }
}
