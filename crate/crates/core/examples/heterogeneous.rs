// A fast and a 3x slower party under the virtual clock.
//
// The fast party finishes each layer early and waits for the slow one, so
// its communication column grows with the input while the slow party only
// pays the link latency.

use hetero2pc::bench::{run_experiment, RunConfig};
use hetero2pc::circuit::MillionaireVariant;
use hetero2pc::profiler::{render_paired_table, render_report, ClockMode, Format};
use hetero2pc::workload::Workload;

pub fn run_example() -> hetero2pc::Result<()> {
    let base = |w: Workload| {
        let mut cfg = RunConfig::loopback(w);
        cfg.throttles = vec![1.0, 3.0];
        cfg.clock = ClockMode::virtual_with_latency(0.1);
        cfg.reps = 1;
        cfg
    };
    let small = run_experiment(&base(Workload::millionaire(32, MillionaireVariant::Tree)))?;
    let large = run_experiment(&base(Workload::millionaire(1024, MillionaireVariant::Tree)))?;
    print!("{}", render_report(&large.report, Format::Table)?);
    println!();
    print!("{}", render_paired_table(&small.report, &large.report));

    let fast = large.report.party(0).expect("party 0").cells;
    println!(
        "\nfast party stalls {:.1}% of its online time",
        100.0 * fast.communication_ms / fast.online_phase_ms
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("heterogeneous example failed");
}
