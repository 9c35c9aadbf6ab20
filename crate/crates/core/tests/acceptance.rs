//! Runs without the libtest harness so every line is printed, pass or fail.

use std::process::ExitCode;

use schoenberg_core::acceptance;

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in acceptance::criterion_ids() {
        let r = acceptance::run(id).unwrap();
        println!("{r}");
        if !r.passed {
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
