//! Acceptance suite: one line per criterion, exact checks, pinned time budgets.

use std::process::ExitCode;
use std::time::Duration;

use wittring::suite;

/// Wall-clock budget per criterion, where one is stated.
fn budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(1)),
        2 => Some(Duration::from_secs(5)),
        4 => Some(Duration::from_secs(60)),
        6 => Some(Duration::from_secs(1)),
        9 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

fn main() -> ExitCode {
    let mut failures = 0;
    for (id, _, _) in suite::CHECKS {
        let outcome = suite::run(id).expect("listed check");
        let over_budget = budget(id).filter(|b| outcome.elapsed > *b);
        let ok = outcome.passed() && over_budget.is_none();
        let detail = match (&outcome.result, over_budget) {
            (Err(e), _) => e.clone(),
            (Ok(_), Some(b)) => format!("took {:.2?}, budget {b:?}", outcome.elapsed),
            (Ok(s), None) => s.clone(),
        };
        println!(
            "[{}] criterion {:>2}: {} ({:.2?}) - {}",
            if ok { "PASS" } else { "FAIL" },
            id,
            outcome.title,
            outcome.elapsed,
            detail
        );
        if !ok {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("acceptance: all {} criteria passed", suite::CHECKS.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
