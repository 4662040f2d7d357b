// Runs the stopping suite at small scale, then again with a seeded fault,
// and replays the first failure.

use stonecalc::harness::{replay, run_suites, Suite, SuiteConfig};
use stonecalc::mutation::Mutation;
use stonecalc::Result;

pub fn run() -> Result<()> {
    let cfg = SuiteConfig {
        seed: 11,
        trials: 50,
        suites: vec![Suite::Stopping],
        ..SuiteConfig::default()
    };
    let report = run_suites(&cfg)?;
    for r in &report.records {
        println!("{:<34} {} failures", r.name, r.failures);
    }
    println!("pass: {}", report.pass);

    let broken = SuiteConfig {
        mutation: Some(Mutation::HittingTimeShift),
        ..cfg
    };
    let report = run_suites(&broken)?;
    let failing = report.records.iter().find(|r| !r.passed()).expect("the fault is caught");
    let fixture = failing.first_failure_fixture.as_ref().expect("failures carry fixtures");
    println!("{} fails at trial {}: {}", failing.name, fixture.trial, fixture.failure);
    println!("replay reproduces: {}", replay(fixture)?.reproduced);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
