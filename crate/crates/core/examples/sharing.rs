// Additive and XOR secret sharing, by hand.

use hetero2pc::ring::RingSpec;
use hetero2pc::rng::SeededRng;
use hetero2pc::sharing::{arith_reconstruct, arith_share, bool_reconstruct, bool_share, BitVector};

pub fn run_example() -> hetero2pc::Result<()> {
    let ring = RingSpec::new(16)?;
    let mut rng = SeededRng::new(7);

    let (s0, s1) = arith_share(40_000, ring, &mut rng)?;
    let (t0, t1) = arith_share(40_000, ring, &mut rng)?;
    println!("shares of 40000 in {ring}: {} + {}", s0.value, s1.value);

    // adding shares adds secrets, mod 2^16
    let sum0 = ring.add(s0.value, t0.value);
    let sum1 = ring.add(s1.value, t1.value);
    let sum = ring.add(sum0, sum1);
    assert_eq!(sum, 14_464);
    assert_eq!(arith_reconstruct(s0, s1)?, 40_000);
    println!("40000 + 40000 = {sum}");

    let x = BitVector::from_bools([true, false, true, true]);
    let (b0, b1) = bool_share(&x, &mut rng);
    assert_eq!(bool_reconstruct(&b0, &b1)?, x);
    println!("bits {x} split into {} ^ {}", b0.bits, b1.bits);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sharing example failed");
}
