//! Problem manifests: a TOML list of entries naming where each problem
//! comes from and how to partition it.
//!
//! ```toml
//! [[entry]]                 # a collection matrix, fetched and cached
//! name = "tols90"
//! group = "Bai"
//! n = 72
//! m = 18
//! case = "general"
//!
//! [[entry]]                 # a local square saddle file
//! name = "cavity"
//! path = "problems/cavity.mtx"
//! n = 578
//! m = 81
//!
//! [[entry]]                 # block files written by the generator
//! name = "desk"
//! blocks = "problems/desk"
//!
//! [[entry]]                 # regenerated from the seeded recipe
//! name = "random1"
//! random = { n = 100, m = 90, density = 0.01, xi = 0.1, seed = 1 }
//! ```
//!
//! Exactly one of `group`, `path`, `blocks`, `random` must be present;
//! `n` and `m` are required for square sources (`group`, `path`). Paths
//! are resolved relative to the manifest file's directory.

use super::random::RandomSaddleSpec;
use crate::scheme::SaddleCase;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Toml {
        path: String,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("entry {entry:?}: {message}")]
    Entry { entry: String, message: String },
}

/// One problem source plus its partition and case annotations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    /// Collection group; the matrix is fetched as `group/name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Local square saddle matrix file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Prefix of block files `{prefix}.A.mtx`, `.B.mtx`, `.C.mtx`,
    /// `.rhs.mtx`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<PathBuf>,
    /// Seeded random recipe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSaddleSpec>,
    /// Leading block order; required with `group`/`path`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Constraint count; required with `group`/`path`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Optional case label to validate the blocks against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
}

/// The classified source of an entry, with required fields resolved.
pub enum EntrySource<'a> {
    Remote { group: &'a str, n: usize, m: usize },
    File { path: &'a Path, n: usize, m: usize },
    Blocks { prefix: &'a Path },
    Random(&'a RandomSaddleSpec),
}

impl CorpusEntry {
    fn err(&self, message: impl Into<String>) -> ManifestError {
        ManifestError::Entry {
            entry: self.name.clone(),
            message: message.into(),
        }
    }

    fn partition(&self) -> Result<(usize, usize), ManifestError> {
        match (self.n, self.m) {
            (Some(n), Some(m)) => Ok((n, m)),
            _ => Err(self.err("square sources need both n and m")),
        }
    }

    /// Validates the exactly-one-source rule and partition requirements.
    pub fn source(&self) -> Result<EntrySource<'_>, ManifestError> {
        let mut kinds = Vec::new();
        if self.group.is_some() {
            kinds.push("group");
        }
        if self.path.is_some() {
            kinds.push("path");
        }
        if self.blocks.is_some() {
            kinds.push("blocks");
        }
        if self.random.is_some() {
            kinds.push("random");
        }
        match kinds.as_slice() {
            [_] => {}
            [] => return Err(self.err("no source; set one of group, path, blocks, random")),
            many => {
                return Err(self.err(format!("ambiguous source; {} are all set", many.join(", "))))
            }
        }
        if let Some(group) = &self.group {
            let (n, m) = self.partition()?;
            return Ok(EntrySource::Remote { group, n, m });
        }
        if let Some(path) = &self.path {
            let (n, m) = self.partition()?;
            return Ok(EntrySource::File { path, n, m });
        }
        if let Some(prefix) = &self.blocks {
            return Ok(EntrySource::Blocks { prefix });
        }
        Ok(EntrySource::Random(
            self.random.as_ref().expect("matched above"),
        ))
    }

    /// The case label, parsed; `None` means detect from the blocks.
    pub fn case_hint(&self) -> Result<Option<SaddleCase>, ManifestError> {
        match &self.case {
            None => Ok(None),
            Some(text) => match text.parse::<SaddleCase>() {
                Ok(case) => Ok(Some(case)),
                Err(e) => Err(self.err(e)),
            },
        }
    }
}

/// A parsed manifest; entry paths have been rebased onto the manifest's
/// directory when loaded from disk.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default, rename = "entry")]
    pub entries: Vec<CorpusEntry>,
}

impl Manifest {
    pub fn parse(text: &str, origin: &str) -> Result<Manifest, ManifestError> {
        let manifest: Manifest = toml::from_str(text).map_err(|e| ManifestError::Toml {
            path: origin.to_string(),
            source: Box::new(e),
        })?;
        for entry in &manifest.entries {
            entry.source()?;
            entry.case_hint()?;
            if let Some(spec) = &entry.random {
                spec.validate().map_err(|e| entry.err(e.to_string()))?;
            }
        }
        Ok(manifest)
    }

    /// Loads and validates a manifest file, rebasing relative `path` and
    /// `blocks` references onto its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Manifest, ManifestError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ManifestError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let mut manifest = Manifest::parse(&text, &path.display().to_string())?;
        if let Some(dir) = path.parent() {
            for entry in &mut manifest.entries {
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
        }
        Ok(manifest)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ManifestError> {
        let path = path.as_ref();
        let text = toml::to_string_pretty(self).expect("manifest serialization cannot fail");
        std::fs::write(path, text).map_err(|e| ManifestError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }
}
