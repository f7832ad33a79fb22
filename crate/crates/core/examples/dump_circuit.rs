// Print a small circuit and its layer schedule.

use hetero2pc::circuit::{assign_layers, build_inner_product, eval_plaintext};
use hetero2pc::ring::RingSpec;

pub fn run_example() -> hetero2pc::Result<()> {
    let c = build_inner_product(2, RingSpec::default())?;
    print!("{}", c.dump());
    let plan = assign_layers(&c)?;
    for (i, layer) in plan.layers.iter().enumerate() {
        println!("layer {i}: local {:?} interactive {:?}", layer.local, layer.interactive);
    }
    println!("rounds: {}", plan.round_count);
    assert_eq!(eval_plaintext(&c, &[3, 4], &[10, 11])?, vec![74]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("dump example failed");
}
