//! Benchmark run configuration: a TOML file naming the problems, the
//! tolerance profiles, and the protocol constants.
//!
//! ```toml
//! profiles = ["large", "mix", "small"]
//! output_dir = "reports"
//! baseline = true
//!
//! [[entry]]
//! name = "tols90"
//! group = "Bai"
//! n = 72
//! m = 18
//! ```
//!
//! `[[entry]]` tables use the manifest format. Top-level defaults:
//! `outer_tol` 1e-5, `max_outer` 1000, `restart` 10, `m_orth` false,
//! `baseline` false, `seed` 0, `output_dir` "reports". Relative paths,
//! `output_dir` included, resolve against the config file's directory.

use crate::error::CliError;
use saddle_core::corpus::CorpusEntry;
use saddle_core::ProfileName;
use serde::Deserialize;
use std::path::{Path, PathBuf};

fn default_outer_tol() -> f64 {
    1e-5
}

fn default_max_outer() -> usize {
    1000
}

fn default_restart() -> usize {
    10
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("reports")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "entry", default)]
    pub entries: Vec<CorpusEntry>,
    #[serde(default)]
    profiles: Vec<String>,
    #[serde(default)]
    pub m_orth: bool,
    #[serde(default = "default_outer_tol")]
    pub outer_tol: f64,
    #[serde(default = "default_max_outer")]
    pub max_outer: usize,
    #[serde(default = "default_restart")]
    pub restart: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub baseline: bool,
    #[serde(skip)]
    resolved_profiles: Vec<ProfileName>,
}

impl RunConfig {
    pub fn parse(text: &str, origin: &str) -> Result<RunConfig, CliError> {
        let mut config: RunConfig =
            toml::from_str(text).map_err(|e| CliError::usage(format!("{origin}: {e}")))?;
        config.validate(origin)?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut config = RunConfig::parse(&text, &path.display().to_string())?;
        if let Some(dir) = path.parent() {
            config.rebase(dir);
        }
        Ok(config)
    }

    pub fn profiles(&self) -> &[ProfileName] {
        &self.resolved_profiles
    }

    fn validate(&mut self, origin: &str) -> Result<(), CliError> {
        if self.entries.is_empty() {
            return Err(CliError::usage(format!(
                "{origin}: config lists no problems; add at least one [[entry]]"
            )));
        }
        if self.profiles.is_empty() {
            return Err(CliError::usage(format!(
                "{origin}: config lists no profiles; set profiles = [...] from large, mix, small"
            )));
        }
        self.resolved_profiles.clear();
        for text in &self.profiles {
            let name: ProfileName = text
                .parse()
                .map_err(|e| CliError::usage(format!("{origin}: {e}")))?;
            if name == ProfileName::Exact {
                return Err(CliError::usage(format!(
                    "{origin}: \"exact\" is a validation profile, not a benchmark profile; use large, mix, or small"
                )));
            }
            if self.resolved_profiles.contains(&name) {
                return Err(CliError::usage(format!(
                    "{origin}: profile {name} is listed twice"
                )));
            }
            self.resolved_profiles.push(name);
        }
        for entry in &self.entries {
            entry.source()?;
            entry.case_hint()?;
            if let Some(spec) = &entry.random {
                spec.validate()
                    .map_err(|e| CliError::usage(format!("entry {:?}: {e}", entry.name)))?;
            }
        }
        Ok(())
    }

    fn rebase(&mut self, dir: &Path) {
        for entry in &mut self.entries {
            if let Some(p) = &entry.path {
                if p.is_relative() {
                    entry.path = Some(dir.join(p));
                }
            }
            if let Some(p) = &entry.blocks {
                if p.is_relative() {
                    entry.blocks = Some(dir.join(p));
                }
            }
        }
        if self.output_dir.is_relative() {
            self.output_dir = dir.join(&self.output_dir);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn applies_defaults_and_resolves_profiles() {
        let text = r#"
            profiles = ["large", "small"]
            [[entry]]
            name = "r"
            random = { n = 10, m = 3, density = 0.1, xi = 0.1, seed = 1 }
        "#;
        let config = RunConfig::parse(text, "test").unwrap();
        assert_eq!(config.outer_tol, 1e-5);
        assert_eq!(config.max_outer, 1000);
        assert_eq!(config.restart, 10);
        assert!(!config.m_orth);
        assert!(!config.baseline);
        assert_eq!(config.profiles(), &[ProfileName::Large, ProfileName::Small]);
    }

    #[test]
    fn rejects_empty_entries_profiles_and_the_exact_profile() {
        let no_entries = "profiles = [\"small\"]\n";
        assert!(RunConfig::parse(no_entries, "test").is_err());

        let no_profiles = r#"
            [[entry]]
            name = "r"
            random = { n = 10, m = 3, density = 0.1, xi = 0.1, seed = 1 }
        "#;
        assert!(RunConfig::parse(no_profiles, "test").is_err());

        let exact = r#"
            profiles = ["exact"]
            [[entry]]
            name = "r"
            random = { n = 10, m = 3, density = 0.1, xi = 0.1, seed = 1 }
        "#;
        let err = RunConfig::parse(exact, "test").unwrap_err();
        assert!(err.to_string().contains("not a benchmark profile"));
    }

    #[test]
    fn rejects_unknown_keys_and_duplicate_profiles() {
        let typo = r#"
            profiles = ["small"]
            max_outter = 5
            [[entry]]
            name = "r"
            random = { n = 10, m = 3, density = 0.1, xi = 0.1, seed = 1 }
        "#;
        assert!(RunConfig::parse(typo, "test").is_err());

        let dup = r#"
            profiles = ["small", "small"]
            [[entry]]
            name = "r"
            random = { n = 10, m = 3, density = 0.1, xi = 0.1, seed = 1 }
        "#;
        let err = RunConfig::parse(dup, "test").unwrap_err();
        assert!(err.to_string().contains("listed twice"));
    }
}
