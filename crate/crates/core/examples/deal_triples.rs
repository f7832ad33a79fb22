// Deal triple pools ahead of time, store them, and run from the files.

use hetero2pc::bench::{run_experiment, write_pool_dir, RunConfig};
use hetero2pc::circuit::MillionaireVariant;
use hetero2pc::preprocessing::{budget_for, deal_for};
use hetero2pc::workload::Workload;

pub fn run_example() -> hetero2pc::Result<()> {
    let dir = tempfile::tempdir()?;
    let mut cfg = RunConfig::loopback(Workload::millionaire(128, MillionaireVariant::Tree));
    cfg.reps = 4;

    let circuit = cfg.workload.build()?;
    let (p0, p1) = deal_for(&circuit, cfg.reps, 99);
    println!("{} AND triples per run, {} dealt", budget_for(&circuit).bool, p0.len());
    write_pool_dir(dir.path(), [&p0, &p1])?;

    cfg.triples = Some(dir.path().to_path_buf());
    let exp = run_experiment(&cfg)?;
    assert!(exp.outputs_ok());
    println!("{} runs completed from {}", exp.outputs.len(), dir.path().display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("triple dealing example failed");
}
