// Input-size sweep for the inner product, as CSV.

use hetero2pc::bench::{run_sweep, RunConfig};
use hetero2pc::profiler::ClockMode;
use hetero2pc::ring::RingSpec;
use hetero2pc::workload::Workload;

pub fn run_example() -> hetero2pc::Result<()> {
    let mut cfg = RunConfig::loopback(Workload::inner_product(1, RingSpec::default()));
    cfg.throttles = vec![1.0, 3.0];
    cfg.clock = ClockMode::virtual_with_latency(0.1);
    cfg.reps = 1;
    cfg.sweep = Some((6, 10));
    let out = run_sweep(&cfg)?;
    assert!(!out.is_partial());
    print!("{}", out.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sweep example failed");
}
