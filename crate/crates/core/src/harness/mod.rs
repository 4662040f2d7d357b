//! Seeded property suites with replayable failure fixtures.
//!
//! Each property runs `trials` independent trials. Trial `i` of property
//! `p` draws everything from its own ChaCha8 stream seeded by
//! [`trial_seed`]`(seed, p, i)`, so any single failure can be regenerated
//! from the configuration alone.

mod config;
mod generate;
mod properties;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mutation::with_mutation;

pub use config::{parse_range, Suite, SuiteConfig};
pub use generate::{trial_seed, ClosedForm, Gen};
pub use properties::{find, Property, Trial, CALCULUS_EPS, CALCULUS_TOLERANCE, PROPERTIES};

/// Everything needed to reproduce one failing trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub property: String,
    pub suite: Suite,
    pub trial: u64,
    pub trial_seed: u64,
    pub config: SuiteConfig,
    pub instance: Value,
    pub failure: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub name: String,
    pub anchor: String,
    pub suite: Suite,
    pub trials: usize,
    pub failures: usize,
    pub first_failure_fixture: Option<Fixture>,
    /// Largest deviation from the exact identity over passing trials; zero
    /// for properties checked with exact equality.
    pub max_observed_slack: f64,
}

impl PropertyRecord {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub records: Vec<PropertyRecord>,
    /// Registered properties of the selected suites with no record.
    pub missing: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn record(&self, name: &str) -> Option<&PropertyRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// True iff every record of `suite` passed.
    pub fn suite_passed(&self, suite: Suite) -> bool {
        self.records.iter().filter(|r| r.suite == suite).all(PropertyRecord::passed)
    }
}

/// Runs one trial of `property` under the configured mutation.
pub fn run_trial(cfg: &SuiteConfig, property: &Property, trial: u64) -> Trial {
    let seed = trial_seed(cfg.seed, property.name, trial);
    with_mutation(cfg.mutation, || {
        let mut g = Gen::new(cfg, seed);
        (property.run)(&mut g, &cfg.tolerance)
    })
}

pub fn run_property(cfg: &SuiteConfig, property: &Property) -> Result<PropertyRecord> {
    cfg.validate()?;
    let outcomes: Vec<(u64, Trial)> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| (i, run_trial(cfg, property, i)))
        .collect();
    let mut record = PropertyRecord {
        name: property.name.to_string(),
        anchor: property.anchor.to_string(),
        suite: property.suite,
        trials: cfg.trials,
        failures: 0,
        first_failure_fixture: None,
        max_observed_slack: 0.0,
    };
    for (i, trial) in outcomes {
        match trial.outcome {
            Ok(slack) => record.max_observed_slack = record.max_observed_slack.max(slack),
            Err(failure) => {
                record.failures += 1;
                if record.first_failure_fixture.is_none() {
                    record.first_failure_fixture = Some(Fixture {
                        property: property.name.to_string(),
                        suite: property.suite,
                        trial: i,
                        trial_seed: trial_seed(cfg.seed, property.name, i),
                        config: cfg.clone(),
                        instance: trial.instance,
                        failure,
                    });
                }
            }
        }
    }
    Ok(record)
}

/// Runs every registered property of the selected suites. Failures are
/// data; the only error is an invalid configuration.
pub fn run_suites(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let selected: Vec<&Property> = PROPERTIES.iter().filter(|p| cfg.suites.contains(&p.suite)).collect();
    let records = selected
        .iter()
        .map(|p| run_property(cfg, p))
        .collect::<Result<Vec<_>>>()?;
    let missing: Vec<String> = selected
        .iter()
        .filter(|p| records.iter().filter(|r| r.name == p.name).count() != 1)
        .map(|p| p.name.to_string())
        .collect();
    let pass = missing.is_empty() && records.iter().all(PropertyRecord::passed);
    Ok(Report {
        config: cfg.clone(),
        records,
        missing,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    /// Same instance and same failure message.
    pub reproduced: bool,
    pub instance_matches: bool,
    pub outcome: std::result::Result<f64, String>,
}

/// Regenerates the trial recorded in `fixture` and checks that it fails
/// the same way on the same instance.
pub fn replay(fixture: &Fixture) -> Result<Replay> {
    fixture.config.validate()?;
    let property = find(&fixture.property)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown property {:?}", fixture.property)))?;
    let expected_seed = trial_seed(fixture.config.seed, property.name, fixture.trial);
    if expected_seed != fixture.trial_seed {
        return Err(Error::InvalidConfig(format!(
            "trial seed {} does not match the stream layout ({expected_seed})",
            fixture.trial_seed
        )));
    }
    let trial = run_trial(&fixture.config, property, fixture.trial);
    let instance_matches = trial.instance == fixture.instance;
    let reproduced = instance_matches && trial.outcome.as_ref().err() == Some(&fixture.failure);
    Ok(Replay {
        reproduced,
        instance_matches,
        outcome: trial.outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_names_are_unique() {
        let mut names: Vec<&str> = PROPERTIES.iter().map(|p| p.name).collect();
        names.sort_unstable();
        let before = names.len();
        names.dedup();
        assert_eq!(before, names.len());
        for p in PROPERTIES {
            assert!(p.name.starts_with(p.suite.name()));
        }
    }

    #[test]
    fn empty_suite_list_passes() {
        let cfg = SuiteConfig {
            suites: vec![],
            ..SuiteConfig::default()
        };
        let r = run_suites(&cfg).unwrap();
        assert!(r.records.is_empty() && r.pass);
    }
}
