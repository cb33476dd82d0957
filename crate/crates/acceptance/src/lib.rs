//! Minimal runner for named acceptance checks.
//!
//! Each check returns a one-line detail on success or a reason on failure.
//! A panic inside a check counts as a failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

pub type Outcome = Result<String, String>;

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

/// Runs every check, prints one `PASS` or `FAIL` line each and returns the
/// number of failures.
pub fn run_all(checks: &[Check]) -> usize {
    let mut failed = 0;
    for check in checks {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check.run)).unwrap_or_else(|panic| {
            let why = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(why)
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {}: {detail} [{secs:.2}s]", check.name),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {}: {reason} [{secs:.2}s]", check.name);
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    failed
}

/// `Ok` when at least `needed` of `total` trials passed.
pub fn quota(label: &str, passed: usize, total: usize, needed: usize, misses: &[String]) -> Outcome {
    let line = format!("{label}: {passed}/{total} (need {needed})");
    if passed >= needed {
        Ok(line)
    } else {
        Err(format!("{line}; misses: {}", misses.join("; ")))
    }
}
