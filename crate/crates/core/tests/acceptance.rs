//! Runs the eleven acceptance criteria at full size and prints one line per
//! criterion. Every criterion must pass. Runs without the test harness so
//! the lines are never captured.

use std::process::ExitCode;
use std::time::Instant;

use radix_approx::verify::{run_criterion, Scale, DEFAULT_SEED};
use radix_approx::Limits;

fn main() -> ExitCode {
    let limits = Limits::default();
    let mut failed = Vec::new();
    for id in 1..=11 {
        let start = Instant::now();
        let o = run_criterion(id, Scale::Full, DEFAULT_SEED, &limits);
        let secs = start.elapsed().as_secs_f64();
        let mark = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} [{mark}] {} ({} checks, {secs:.1}s): {}",
            o.name, o.checked, o.detail
        );
        if !o.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
