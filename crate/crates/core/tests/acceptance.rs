//! Acceptance criteria 1–8, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line reaches the output.
//! Numeric arguments select criteria; other arguments are ignored.

use std::process::ExitCode;

use compact_subst::selftest;

fn main() -> ExitCode {
    let mut ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if ids.is_empty() {
        ids = (1..=8).collect();
    }
    let mut failed = Vec::new();
    for id in ids {
        let Some(report) = selftest::criterion(id) else {
            eprintln!("no criterion {id}");
            return ExitCode::FAILURE;
        };
        println!("{}", report.summary_line());
        for c in &report.checks {
            println!(
                "    [{}] {}: {}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        if !report.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
