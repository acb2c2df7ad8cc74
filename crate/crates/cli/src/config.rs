//! Flat `key = value` experiment files.
//!
//! Keys are the long flag names of the chosen subcommand (`p`, `n`, `source`,
//! `adversary`, `mode`, `trials`, `seed`, `output`, ...) plus an optional
//! `experiment` naming the subcommand. Values from the file act as defaults;
//! flags on the command line win, and `NMEXT_SEED` wins over both.

use std::collections::BTreeMap;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    pub entries: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            let (key, value) = (key.trim().replace('_', "-"), value.trim().to_string());
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(CliError::Usage(format!("config line {}: bad key {key:?}", i + 1)));
            }
            if key == "experiment" {
                cfg.experiment = Some(value);
            } else if cfg.entries.insert(key.clone(), value).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(cfg)
    }

    /// Entries as `--key value` pairs, for splicing ahead of explicit flags.
    pub fn to_args(&self) -> Vec<String> {
        self.entries.iter().flat_map(|(k, v)| [format!("--{k}"), v.clone()]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_files() {
        let cfg = ExperimentConfig::parse("experiment = dw-run\n# comment\np=3\nmaster_seed = 7 # trailing\n").unwrap();
        assert_eq!(cfg.experiment.as_deref(), Some("dw-run"));
        assert_eq!(cfg.to_args(), vec!["--master-seed", "7", "--p", "3"]);
        assert!(ExperimentConfig::parse("p 3").is_err());
        assert!(ExperimentConfig::parse("p=3\np=4").is_err());
    }
}
