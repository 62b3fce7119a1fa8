//! The nine acceptance criteria, one printed line each. Runs without the
//! libtest harness so the lines are shown even when every criterion passes.

use std::process::ExitCode;

use omega_pushdown::suite::{run_criterion, SuiteConfig};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    for n in 1..=9 {
        let r = run_criterion(n, &cfg);
        println!("{r}");
        if !r.passed() {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria {failed:?} did not pass");
        ExitCode::FAILURE
    }
}
