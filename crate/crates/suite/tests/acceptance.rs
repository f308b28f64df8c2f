//! Runs the experiment behind each acceptance criterion with its default
//! parameters and prints one PASS/FAIL line per criterion. Exits nonzero when
//! any criterion fails.

use std::process::ExitCode;

use dixlab::experiments::{for_criterion, run_default};

const CRITERIA: u8 = 9;

fn main() -> ExitCode {
    let root = tempfile::tempdir().expect("temporary output directory");
    let mut failed = Vec::new();
    for n in 1..=CRITERIA {
        let Some(exp) = for_criterion(n) else {
            println!("FAIL criterion {n}: no registered experiment");
            failed.push(n);
            continue;
        };
        match run_default(exp.name, &root.path().join(exp.name)) {
            Ok(report) if report.passed => {
                println!("PASS criterion {n}: {} ({:.2} s)", exp.name, report.wall_clock_seconds);
            }
            Ok(report) => {
                println!("FAIL criterion {n}: {} ({:.2} s)", exp.name, report.wall_clock_seconds);
                for a in report.failures() {
                    let tol = a.tolerance.map(|t| format!(" (tol {t:e})")).unwrap_or_default();
                    println!("    {}: measured {} {} {}{tol}", a.name, a.measured, a.relation, a.expected);
                }
                if let Some(e) = &report.error {
                    println!("    error: {e}");
                }
                failed.push(n);
            }
            Err(e) => {
                println!("FAIL criterion {n}: {}: {e}", exp.name);
                failed.push(n);
            }
        }
    }
    println!("acceptance: {} of {CRITERIA} criteria passed", CRITERIA as usize - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
