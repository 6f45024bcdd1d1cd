//! A small seeded verification run of every property.

use infrig::verify::{run, Property, VerifyPlan};

fn main() -> infrig::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    for property in Property::ALL {
        let report = run(&VerifyPlan::new(property, 25, seed)?);
        println!(
            "{property:<26} {}/{} pass",
            report.passed(),
            report.outcomes.len()
        );
    }
    Ok(())
}
