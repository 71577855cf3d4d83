//! qld: experiments on list decoding block codes from corruption tables.
//!
//! Exit codes: 0 success, 2 parameter or validation error, 3 runtime
//! (I/O) error. Failures print a single machine-readable line
//! `ERROR <code> <message>` on stderr.

mod args;
mod config;
mod report;
mod run;

use clap::Parser;
use qld_core::Error;

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 3,
        _ => 2,
    }
}

fn main() {
    let raw: Vec<String> = std::env::args().collect();
    let expanded = match config::expand_args(raw) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("ERROR {} {e}", exit_code(&e));
            std::process::exit(exit_code(&e));
        }
    };
    let cli = args::Cli::parse_from(expanded);
    if let Err(e) = run::dispatch(cli) {
        eprintln!("ERROR {} {e}", exit_code(&e));
        std::process::exit(exit_code(&e));
    }
}
