// Two parties over a localhost TCP connection, one per thread.
//
// Across machines, run `mpc-bench --role 1 --listen PORT` on one host and
// `mpc-bench --role 0 --connect HOST:PORT` on the other with the same flags.

use std::net::TcpListener;
use std::thread;

use hetero2pc::bench::{parse_args, run_experiment};

pub fn run_example() -> hetero2pc::Result<()> {
    let port = TcpListener::bind("127.0.0.1:0")?.local_addr()?.port();
    let common = "--app millionaire --bitlen 64 --reps 2 --seed 5";
    let p1 = parse_args(format!("mpc-bench --role 1 --listen {port} --throttle 2 {common}").split_whitespace())?;
    let p0 = parse_args(format!("mpc-bench --role 0 --connect 127.0.0.1:{port} {common}").split_whitespace())?;

    let listener = thread::spawn(move || run_experiment(&p1));
    let e0 = run_experiment(&p0)?;
    let e1 = listener.join().expect("party 1 panicked")?;
    assert!(e0.outputs_ok() && e1.outputs_ok());
    for (name, e) in [("P0", &e0), ("P1", &e1)] {
        let c = e.report.parties[0].cells;
        println!(
            "{name}: outputs {:?}, online {:.3} ms, communication {:.3} ms",
            e.outputs.iter().map(|r| r[0][0]).collect::<Vec<_>>(),
            c.online_phase_ms,
            c.communication_ms
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("tcp example failed");
}
