//! Run configuration: a TOML file merged with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use asd_forge_core::arith::is_prime;
use asd_forge_core::asd::suites::{SuiteName, ALL_SUITES};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

/// Parses `5..50`, `5..=50`, `7`, or comma lists of those into the sorted primes they cover.
/// Ranges are inclusive at both ends.
pub fn parse_primes(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("malformed prime range `{s}`: {why}"));
    let mut out = Vec::new();
    if s.trim().is_empty() {
        return Err(bad("empty"));
    }
    for part in s.split(',') {
        let part = part.trim();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad(&format!("`{t}` is not a nonnegative integer")));
        if let Some((lo, hi)) = part.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(bad(&format!("{lo} > {hi}")));
            }
            if hi > 1_000_000 {
                return Err(bad("upper end above 10^6"));
            }
            out.extend((lo..=hi).filter(|&p| is_prime(p)));
        } else {
            let p = num(part)?;
            if !is_prime(p) {
                return Err(bad(&format!("{p} is not prime")));
            }
            out.push(p);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(bad("contains no primes"));
    }
    Ok(out)
}

/// Per-suite overrides in the config file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteOverride {
    pub primes: Option<String>,
    pub n_max: Option<u64>,
}

/// The on-disk form of [`RunConfig`]; every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub suites: Option<Vec<String>>,
    pub primes: Option<String>,
    pub n_max: Option<u64>,
    pub order: Option<u64>,
    pub precision: Option<u32>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    /// Largest index bound a single suite cell may request.
    pub budget_n_max: Option<u64>,
    #[serde(default)]
    pub suite: BTreeMap<String, SuiteOverride>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// One suite with the primes and bound it will run at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuitePlan {
    pub suite: SuiteName,
    pub primes: Vec<u64>,
    /// `None` means the per-prime default.
    pub n_max: Option<u64>,
    /// Requested primes the suite is not defined at.
    pub skipped: Vec<u64>,
}

impl SuitePlan {
    pub fn n_max_at(&self, p: u64) -> u64 {
        self.n_max.unwrap_or_else(|| self.suite.default_n_max(p))
    }
}

pub const DEFAULT_BUDGET_N_MAX: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub plans: Vec<SuitePlan>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub budget_n_max: u64,
}

/// Flag values from the command line; these win over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub primes: Option<String>,
    pub n_max: Option<u64>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn build(file: &FileConfig, flags: &Overrides) -> Result<Self, CliError> {
        let names: Vec<String> = if !flags.suites.is_empty() {
            flags.suites.clone()
        } else {
            file.suites.clone().unwrap_or_else(|| vec!["all".into()])
        };
        let mut suites = Vec::new();
        for n in &names {
            if n == "all" {
                suites.extend(ALL_SUITES);
            } else {
                suites.push(SuiteName::parse(n).map_err(|_| {
                    let known: Vec<&str> = ALL_SUITES.iter().map(|s| s.as_str()).collect();
                    CliError::Config(format!("unknown suite `{n}` (known: {}, all)", known.join(", ")))
                })?);
            }
        }
        suites.dedup();
        for key in file.suite.keys() {
            SuiteName::parse(key).map_err(|_| CliError::Config(format!("[suite.{key}]: unknown suite")))?;
        }
        let n_max = flags.n_max.or(file.n_max);
        if n_max == Some(0) {
            return Err(CliError::Config("n_max must be positive".into()));
        }
        let budget = file.budget_n_max.unwrap_or(DEFAULT_BUDGET_N_MAX);
        if budget == 0 {
            return Err(CliError::Config("budget_n_max must be positive".into()));
        }
        if let Some(0) = flags.threads.or(file.threads) {
            return Err(CliError::Config("threads must be positive".into()));
        }
        let mut plans = Vec::new();
        for s in suites {
            let over = file.suite.get(s.as_str());
            // flags beat the per-suite table, which beats the top-level keys
            let primes_src = flags.primes.clone().or_else(|| over.and_then(|o| o.primes.clone())).or_else(|| file.primes.clone());
            let requested = match primes_src {
                Some(src) => parse_primes(&src)?,
                None => s.default_params().primes,
            };
            let (primes, skipped): (Vec<u64>, Vec<u64>) = requested.into_iter().partition(|&p| s.admissible(p));
            let n = flags.n_max.or_else(|| over.and_then(|o| o.n_max)).or(n_max);
            if n == Some(0) {
                return Err(CliError::Config(format!("[suite.{}] n_max must be positive", s.as_str())));
            }
            plans.push(SuitePlan { suite: s, primes, n_max: n, skipped });
        }
        Ok(RunConfig {
            plans,
            threads: flags.threads.or(file.threads),
            output: flags.output.clone().or_else(|| file.output.clone()),
            format: flags.format.or(file.format).unwrap_or_default(),
            budget_n_max: budget,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_ranges() {
        assert_eq!(parse_primes("5..13").unwrap(), vec![5, 7, 11, 13]);
        assert_eq!(parse_primes("5..=13").unwrap(), vec![5, 7, 11, 13]);
        assert_eq!(parse_primes("7, 3,7").unwrap(), vec![3, 7]);
        assert_eq!(parse_primes("2..3,11").unwrap(), vec![2, 3, 11]);
        for bad in ["", "5..", "..5", "13..5", "a..b", "9", "24..28", "5-13"] {
            assert!(parse_primes(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig::parse(
            r#"
            suites = ["kibelbek", "asd-ec"]
            primes = "5..7"
            n_max = 300
            format = "csv"
            [suite.kibelbek]
            primes = "3,7,13"
            n_max = 400
            "#,
        )
        .unwrap();
        let cfg = RunConfig::build(&file, &Overrides::default()).unwrap();
        assert_eq!(cfg.format, Format::Csv);
        let k = &cfg.plans[0];
        assert_eq!((k.primes.clone(), k.skipped.clone(), k.n_max), (vec![3, 7, 13], vec![], Some(400)));
        let e = &cfg.plans[1];
        assert_eq!((e.primes.clone(), e.n_max), (vec![5, 7], Some(300)));

        let flags = Overrides { primes: Some("5..11".into()), n_max: Some(100), format: Some(Format::Json), ..Default::default() };
        let cfg = RunConfig::build(&file, &flags).unwrap();
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.plans[0].primes, vec![7]);
        assert_eq!(cfg.plans[0].skipped, vec![5, 11]);
        assert_eq!(cfg.plans[1].n_max, Some(100));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(FileConfig::parse("nmax = 3").is_err());
        assert!(RunConfig::build(&FileConfig::parse("[suite.nope]\nn_max = 3").unwrap(), &Overrides::default()).is_err());
        assert!(RunConfig::build(&FileConfig::parse("n_max = 0").unwrap(), &Overrides::default()).is_err());
        let flags = Overrides { suites: vec!["bogus".into()], ..Default::default() };
        assert!(RunConfig::build(&FileConfig::default(), &flags).is_err());
    }

    #[test]
    fn default_plan_uses_suite_defaults() {
        let cfg = RunConfig::build(&FileConfig::default(), &Overrides::default()).unwrap();
        assert_eq!(cfg.plans.len(), ALL_SUITES.len());
        let ks = cfg.plans.iter().find(|p| p.suite == SuiteName::KsExample).unwrap();
        assert_eq!(ks.n_max_at(13), 20 * 13 * 13 * 13);
    }
}
