// Secure inner product of two 128-element vectors, both parties in-process.

use hetero2pc::bench::{run_experiment, RunConfig};
use hetero2pc::profiler::{render_report, Format};
use hetero2pc::ring::RingSpec;
use hetero2pc::workload::Workload;

pub fn run_example() -> hetero2pc::Result<()> {
    let mut cfg = RunConfig::loopback(Workload::inner_product(128, RingSpec::new(16)?));
    cfg.reps = 3;
    let exp = run_experiment(&cfg)?;
    assert!(exp.outputs_ok());
    println!("first result: {:?}", exp.outputs[0][0]);
    print!("{}", render_report(&exp.report, Format::Table)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("inner product example failed");
}
