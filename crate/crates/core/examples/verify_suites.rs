//! Runs the invariant suites from code rather than from the command line.

use tunnelinfo::montecarlo::InverseTransform;
use tunnelinfo::verify::{run_suite, Suite};

fn main() -> tunnelinfo::Result<()> {
    let suite = std::env::args()
        .nth(1)
        .map(|s| s.parse::<Suite>())
        .transpose()
        .map_err(tunnelinfo::Error::InvalidConfig)?
        .unwrap_or(Suite::Identities);
    let report = run_suite(suite, &InverseTransform)?;
    for check in &report.checks {
        println!("{check}");
    }
    println!("all passed: {}", report.passed());
    Ok(())
}
