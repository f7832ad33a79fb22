mod sharing {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sharing.rs"));
}

#[test]
fn sharing_example_runs() {
    sharing::run_example().expect("sharing example should run");
}

mod inner_product {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/inner_product.rs"));
}

#[test]
fn inner_product_example_runs() {
    inner_product::run_example().expect("inner_product example should run");
}

mod millionaire {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/millionaire.rs"));
}

#[test]
fn millionaire_example_runs() {
    millionaire::run_example().expect("millionaire example should run");
}

mod heterogeneous {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/heterogeneous.rs"));
}

#[test]
fn heterogeneous_example_runs() {
    heterogeneous::run_example().expect("heterogeneous example should run");
}

mod sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sweep.rs"));
}

#[test]
fn sweep_example_runs() {
    sweep::run_example().expect("sweep example should run");
}

mod tcp_parties {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tcp_parties.rs"));
}

#[test]
fn tcp_parties_example_runs() {
    tcp_parties::run_example().expect("tcp_parties example should run");
}

mod deal_triples {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/deal_triples.rs"));
}

#[test]
fn deal_triples_example_runs() {
    deal_triples::run_example().expect("deal_triples example should run");
}

mod dump_circuit {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dump_circuit.rs"));
}

#[test]
fn dump_circuit_example_runs() {
    dump_circuit::run_example().expect("dump_circuit example should run");
}
