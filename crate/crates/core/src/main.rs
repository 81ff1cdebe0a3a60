use std::io::Write;

use clap::Parser;
use groupoid_hk::cli::{run, RunConfig, EXIT_INPUT};

fn main() {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap uses 2 for usage errors, which is taken by precondition failures
            std::process::exit(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let outcome = run(&config);
    let _ = std::io::stdout()
        .lock()
        .write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr()
        .lock()
        .write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
