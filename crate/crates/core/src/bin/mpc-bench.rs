use std::io;
use std::process::ExitCode;

use clap::Parser;
use hetero2pc::bench::{main_with, Cli, RunConfig, EXIT_USAGE};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_from(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let code = main_with(&cfg, &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
