//! Exit-code classification. Usage errors (exit 1) are problems with what
//! the user asked for: bad flags, unreadable or malformed inputs, invalid
//! configs. Runtime errors (exit 2) are failures while carrying the
//! request out: network fetches, report IO, and non-converged runs under
//! `--strict`.

use saddle_core::corpus::{CorpusError, FetchError, ManifestError, MatrixMarketError};
use saddle_core::SchemeError;
use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError::Runtime(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(message) | CliError::Runtime(message) => f.write_str(message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ManifestError> for CliError {
    fn from(e: ManifestError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<MatrixMarketError> for CliError {
    fn from(e: MatrixMarketError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FetchError> for CliError {
    fn from(e: FetchError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Acquiring a problem fails at run time only when the network is
/// involved; everything else means the entry itself is wrong.
impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Fetch(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
