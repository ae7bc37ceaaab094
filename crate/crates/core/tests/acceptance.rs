//! Acceptance suite: runs every criterion and prints one PASS/FAIL line per
//! criterion. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use sawset::verify::{run_criterion, run_verification, Level, VerifyOptions};

fn line(id: u32, passed: bool, ms: u128, name: &str, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {verdict} [{ms} ms] {name}: {detail}");
}

/// Reports from 1 and 8 workers, timing removed, must serialize identically.
fn worker_independence() -> bool {
    let start = Instant::now();
    let run = |workers| {
        let report = run_verification(VerifyOptions { level: Level::Quick, workers, ..VerifyOptions::default() });
        serde_json::to_string_pretty(&report.without_timing()).expect("reports serialize")
    };
    let passed = run(1) == run(8);
    let detail = if passed { "reports for 1 and 8 workers are byte-identical" } else { "reports differ" };
    line(12, passed, start.elapsed().as_millis(), "worker independence", detail);
    passed
}

fn main() -> ExitCode {
    let opts = VerifyOptions { workers: 4, ..VerifyOptions::default() };
    let mut all = true;
    for id in 1..=11 {
        let r = run_criterion(id, opts);
        line(id, r.passed, r.elapsed_ms.unwrap_or(0) as u128, &r.name, &r.detail);
        all &= r.passed;
    }
    all &= worker_independence();
    if all {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
