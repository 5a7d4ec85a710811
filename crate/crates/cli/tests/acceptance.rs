//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;

use nanoqed_cli::{validate, ValidationOptions};

fn main() -> ExitCode {
    let workers = std::env::var("NANOQED_WORKERS").ok().and_then(|w| w.parse().ok());
    let report = validate(&ValidationOptions {
        workers,
        ..Default::default()
    });
    println!("\nacceptance");
    println!("{report}");
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
