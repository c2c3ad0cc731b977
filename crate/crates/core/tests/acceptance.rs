//! One line per acceptance criterion, full scale. Exits nonzero if any fails.

use std::process::ExitCode;

use hyperdisc::verify::{run_criterion, Scale, Status, SUITES};

fn main() -> ExitCode {
    let seed = 0;
    let mut failed = 0;
    for c in 1..=SUITES.len() {
        let check = run_criterion(c, Scale::Full, seed);
        let values: Vec<String> = check.values.iter().map(|(k, v)| format!("{k}={v:.6e}")).collect();
        println!(
            "[{}] criterion {:>2} {:<18} {:>8.2}s  {}{}",
            check.status,
            c,
            check.name,
            check.seconds,
            if check.detail.is_empty() { String::new() } else { format!("{}  ", check.detail) },
            values.join(" ")
        );
        if check.status == Status::Fail {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", SUITES.len() - failed, SUITES.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
