//! Acceptance battery: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::io::Write;
use std::process::ExitCode;

use shortwave::config::Thresholds;
use shortwave::suite::{criteria, evaluate};

fn main() -> ExitCode {
    let thresholds = Thresholds::default();
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for c in criteria() {
        let r = evaluate(&c, &thresholds);
        writeln!(stdout, "{}", r.line()).ok();
        stdout.flush().ok();
        if !r.passed {
            failed.push(r.id);
        }
    }
    if failed.is_empty() {
        writeln!(stdout, "acceptance: all criteria passed").ok();
        ExitCode::SUCCESS
    } else {
        writeln!(stdout, "acceptance: failed {}", failed.join(", ")).ok();
        ExitCode::FAILURE
    }
}
