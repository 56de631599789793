//! Acceptance table, run as a plain binary (`harness = false`) so the
//! PASS/FAIL line for every criterion always reaches the test log. Exits
//! non-zero if any criterion fails.

use std::time::Instant;

use orbitkit::repro::{run_criterion, CRITERIA};

fn main() {
    println!("\nrunning {CRITERIA} acceptance criteria");
    let start = Instant::now();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let r = run_criterion(id);
        println!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if failed.is_empty() {
        println!("acceptance: {CRITERIA}/{CRITERIA} criteria pass ({secs:.2}s)\n");
    } else {
        println!(
            "acceptance: {}/{CRITERIA} criteria pass; failing: {failed:?} ({secs:.2}s)\n",
            CRITERIA - failed.len()
        );
        std::process::exit(1);
    }
}
