// Greater-than on secret 16-bit integers with both comparator layouts.

use hetero2pc::circuit::{assign_layers, build_millionaire, MillionaireVariant};
use hetero2pc::preprocessing::deal_for;
use hetero2pc::runtime::{run_loopback, LoopbackConfig};

fn bits(v: u64, n: usize) -> Vec<u64> {
    (0..n).map(|i| (v >> i) & 1).collect()
}

pub fn run_example() -> hetero2pc::Result<()> {
    let n = 16;
    let (x, y) = (51_234u64, 51_233u64);
    for variant in [MillionaireVariant::Ripple, MillionaireVariant::Tree] {
        let c = build_millionaire(n, variant)?;
        let rounds = assign_layers(&c)?.round_count;
        let (mut p0, mut p1) = deal_for(&c, 1, 42);
        let run = run_loopback(&c, [&bits(x, n), &bits(y, n)], [&mut p0, &mut p1], &LoopbackConfig::default())?;
        assert_eq!(run.outputs[0], vec![1]);
        println!("{variant:>6}: {} gates, {rounds} rounds, {x} > {y} = {}", c.len(), run.outputs[0][0]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("millionaire example failed");
}
