use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Tolerance;
use crate::mutation::Mutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Core,
    Spectral,
    Probability,
    Stopping,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Core, Suite::Spectral, Suite::Probability, Suite::Stopping];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Spectral => "spectral",
            Suite::Probability => "probability",
            Suite::Stopping => "stopping",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s.trim())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite {s:?}")))
    }
}

/// Parameters of a verification run. Identical configurations produce
/// identical reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Inclusive range of atom counts.
    pub atoms: (usize, usize),
    /// Inclusive range of filtration horizons.
    pub horizon: (usize, usize),
    pub trials: usize,
    pub tolerance: Tolerance,
    pub suites: Vec<Suite>,
    /// Seeded fault to run the suites against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            atoms: (1, 16),
            horizon: (1, 8),
            trials: 1000,
            tolerance: Tolerance::default(),
            suites: Suite::ALL.to_vec(),
            mutation: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.atoms;
        if lo == 0 || lo > hi || hi > 64 {
            return Err(Error::InvalidConfig(format!("atoms range {lo}..{hi} must satisfy 1 <= min <= max <= 64")));
        }
        let (lo, hi) = self.horizon;
        if lo == 0 || lo > hi || hi > 64 {
            return Err(Error::InvalidConfig(format!("horizon range {lo}..{hi} must satisfy 1 <= min <= max <= 64")));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be positive".into()));
        }
        let t = self.tolerance;
        if !(t.relative >= 0.0 && t.absolute >= 0.0 && t.relative.is_finite() && t.absolute.is_finite()) {
            return Err(Error::InvalidConfig("tolerances must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Parses `A..B` (inclusive) or a single `A`.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidConfig(format!("expected A..B, got {s:?}"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_suites_parse() {
        assert_eq!(parse_range("1..16").unwrap(), (1, 16));
        assert_eq!(parse_range("2..=3").unwrap(), (2, 3));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("a..b").is_err());
        assert_eq!("stopping".parse::<Suite>().unwrap(), Suite::Stopping);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn invalid_configs() {
        assert!(SuiteConfig::default().validate().is_ok());
        let bad = SuiteConfig {
            atoms: (0, 3),
            ..SuiteConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SuiteConfig {
            horizon: (5, 2),
            ..SuiteConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SuiteConfig {
            trials: 0,
            ..SuiteConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
