use std::net::TcpListener;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_mpc-bench");

fn run(args: &str) -> Output {
    Command::new(BIN).args(args.split_whitespace()).output().expect("spawn mpc-bench")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn json_outputs(o: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    v["meta"]["outputs"].clone()
}

#[test]
fn usage_error_names_the_missing_flag() {
    let o = run("--role 0 --app innerproduct");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--connect"));
    assert_eq!(run("--role loopback --frobnicate").status.code(), Some(2));
}

#[test]
fn ripple_warning_goes_to_stderr() {
    let o = run("--role loopback --app millionaire --bitlen 4096 --variant ripple --reps 1 --clock virtual");
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("4097 rounds"));
}

#[test]
fn virtual_inner_product_table_matches_golden() {
    let o = run("--role loopback --app innerproduct --size 64 --throttle 1,2 --clock virtual --latency-ms 0.5 --reps 2 --seed 3");
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("innerproduct_virtual.txt"));
}

#[test]
fn golden_inner_product_values_follow_the_cost_model() {
    // n = 64, costs: add 1, prepare 2, finish 3 units of 0.001 ms; throttle (1, 2); latency 0.5
    let unit = 0.001;
    let (adds, muls) = (63.0, 64.0);
    let fast_local = adds * unit;
    let fast_prep = (muls + 1.0) * 2.0 * unit;
    let fast_finish = (muls + 1.0) * 3.0 * unit;
    // round 1: gap in MUL preparation; round 2: gap in finish + adds + output preparation
    let gap1 = muls * 2.0 * unit;
    let gap2 = muls * 3.0 * unit + adds * unit + 2.0 * unit;
    let fast_comm = gap1 + 0.5 + gap2 + 0.5;
    let want = [
        format!("{fast_local:.3} | {:.3}", 2.0 * fast_local),
        format!("{fast_prep:.3} | {:.3}", 2.0 * fast_prep),
        format!("{fast_finish:.3} | {:.3}", 2.0 * fast_finish),
        format!("{fast_comm:.3} | {:.3}", 1.0),
    ];
    let g = golden("innerproduct_virtual.txt");
    let rows: Vec<&str> = g.lines().skip(3).collect();
    for (row, w) in rows.iter().zip(&want) {
        assert!(row.ends_with(w.as_str()), "{row} vs {w}");
    }
}

#[test]
fn virtual_millionaire_table_matches_golden() {
    let o = run("--role loopback --app millionaire --bitlen 16 --variant ripple --throttle 1.5,1 --clock virtual --reps 1 --seed 3");
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("millionaire_virtual.txt"));
}

#[test]
fn csv_and_json_formats() {
    let o = run("--role loopback --app innerproduct --size 8 --reps 2 --format csv --clock virtual");
    let s = stdout(&o);
    let mut lines = s.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("party,local_gates_ms"), "{header}");
    assert_eq!(lines.count(), 2);
    let o = run("--role loopback --app innerproduct --size 8 --reps 2 --format json");
    assert_eq!(json_outputs(&o).as_array().unwrap().len(), 2);
}

#[test]
fn sweep_writes_one_row_per_size() {
    let o = run("--role loopback --sweep 6:12 --throttle 1,3 --clock virtual --reps 1");
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 8);
    let one = stdout(&run("--role loopback --sweep 5:5 --clock virtual --reps 1"));
    assert_eq!(one.lines().count(), 2);
    // equal throttles and no latency: nobody waits
    let flat = stdout(&run("--role loopback --sweep 3:6 --throttle 1,1 --clock virtual --latency-ms 0 --reps 1"));
    for line in flat.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!((f[1], f[2]), (0.0, 0.0));
    }
}

#[test]
fn two_processes_over_tcp_agree_with_loopback() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let common = "--app innerproduct --size 128 --reps 3 --seed 9 --format json";
    let listener = Command::new(BIN)
        .args(format!("--role 1 --listen {port} --throttle 2 {common}").split_whitespace())
        .spawn_output();
    let p0 = run(&format!("--role 0 --connect 127.0.0.1:{port} {common}"));
    let p1 = listener.join().unwrap();
    assert!(p0.status.success(), "{}", String::from_utf8_lossy(&p0.stderr));
    assert!(p1.status.success(), "{}", String::from_utf8_lossy(&p1.stderr));
    let lb = run(&format!("--role loopback {common}"));
    assert_eq!(json_outputs(&p0), json_outputs(&lb));
    assert_eq!(json_outputs(&p1), json_outputs(&lb));
}

#[test]
fn tcp_mismatch_fails_both_sides() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let listener = Command::new(BIN)
        .args(format!("--role 1 --listen {port} --app innerproduct --bitlen 32 --reps 1").split_whitespace())
        .spawn_output();
    let p0 = run(&format!("--role 0 --connect 127.0.0.1:{port} --app innerproduct --bitlen 16 --reps 1"));
    let p1 = listener.join().unwrap();
    assert_eq!(p0.status.code(), Some(1));
    assert_eq!(p1.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&p0.stderr).contains("mismatch on `l`: local 16, peer 32"));
    assert!(String::from_utf8_lossy(&p1.stderr).contains("mismatch on `l`: local 32, peer 16"));
}

trait SpawnOutput {
    fn spawn_output(&mut self) -> std::thread::JoinHandle<Output>;
}

impl SpawnOutput for Command {
    fn spawn_output(&mut self) -> std::thread::JoinHandle<Output> {
        let child = self
            .stdout(std::process::Stdio::piped())
            .stderr(std::process::Stdio::piped())
            .spawn()
            .expect("spawn mpc-bench");
        std::thread::spawn(move || child.wait_with_output().unwrap())
    }
}
