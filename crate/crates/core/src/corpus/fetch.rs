//! Downloads collection matrices into a local cache.
//!
//! Archives are expected at `{base_url}/{group}/{name}.tar.gz`, holding
//! `{name}/{name}.mtx` inside; the unpacked file lands at
//! `{cache_dir}/{group}/{name}/{name}.mtx`. A cache hit skips the network
//! entirely, and downloads are written to a scratch name and renamed only
//! after the file parses, so an interrupted or corrupt fetch never
//! poisons the cache.

use super::matrix_market::{read_matrix_market, MatrixMarketError};
use std::path::{Path, PathBuf};
use std::time::Duration;
use thiserror::Error;

/// Environment variable overriding the cache root.
pub const CACHE_ENV: &str = "SADDLE_CACHE_DIR";
/// Environment variable overriding the download base URL.
pub const BASE_URL_ENV: &str = "SADDLE_FETCH_BASE_URL";
/// Default download base; the public collection's Matrix Market tree.
pub const DEFAULT_BASE_URL: &str = "https://sparse.tamu.edu/MM";

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("network failure fetching {url}: {message}")]
    Network { url: String, message: String },
    #[error("HTTP status {status} fetching {url}")]
    Http { url: String, status: u16 },
    #[error("archive at {url} is unreadable: {message}")]
    Archive { url: String, message: String },
    #[error("archive at {url} holds no {wanted}; it contains: {found}")]
    MissingEntry {
        url: String,
        wanted: String,
        found: String,
    },
    #[error("io error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("fetched matrix failed to parse: {0}")]
    Invalid(#[from] MatrixMarketError),
}

/// Cache and endpoint overrides; `None` fields fall back to the
/// environment variables and then the defaults.
#[derive(Clone, Debug, Default)]
pub struct FetchSettings {
    pub cache_dir: Option<PathBuf>,
    pub base_url: Option<String>,
}

impl FetchSettings {
    pub fn resolved_cache_dir(&self) -> PathBuf {
        if let Some(dir) = &self.cache_dir {
            return dir.clone();
        }
        if let Ok(dir) = std::env::var(CACHE_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir);
            }
        }
        if let Ok(home) = std::env::var("HOME") {
            if !home.is_empty() {
                return Path::new(&home).join(".cache").join("saddle-bench");
            }
        }
        std::env::temp_dir().join("saddle-bench-cache")
    }

    pub fn resolved_base_url(&self) -> String {
        if let Some(url) = &self.base_url {
            return url.trim_end_matches('/').to_string();
        }
        if let Ok(url) = std::env::var(BASE_URL_ENV) {
            if !url.is_empty() {
                return url.trim_end_matches('/').to_string();
            }
        }
        DEFAULT_BASE_URL.to_string()
    }
}

fn io_err(path: &Path, source: std::io::Error) -> FetchError {
    FetchError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Returns the local path of `{group}/{name}`, downloading and unpacking
/// it on a cache miss. The cached file has been parse-validated.
pub fn fetch_suitesparse(
    group: &str,
    name: &str,
    settings: &FetchSettings,
) -> Result<PathBuf, FetchError> {
    let dir = settings.resolved_cache_dir().join(group).join(name);
    let target = dir.join(format!("{name}.mtx"));
    if target.is_file() {
        return Ok(target);
    }

    let url = format!("{}/{group}/{name}.tar.gz", settings.resolved_base_url());
    let response = ureq::get(&url)
        .timeout(Duration::from_secs(300))
        .call()
        .map_err(|e| match e {
            ureq::Error::Status(status, _) => FetchError::Http {
                url: url.clone(),
                status,
            },
            other => FetchError::Network {
                url: url.clone(),
                message: other.to_string(),
            },
        })?;

    std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let scratch = dir.join(format!(".{name}.mtx.part"));

    let wanted = format!("{name}.mtx");
    let decoder = flate2::read::GzDecoder::new(response.into_reader());
    let mut archive = tar::Archive::new(decoder);
    let mut found_names = Vec::new();
    let mut unpacked = false;
    let entries = archive.entries().map_err(|e| FetchError::Archive {
        url: url.clone(),
        message: e.to_string(),
    })?;
    for entry in entries {
        let mut entry = entry.map_err(|e| FetchError::Archive {
            url: url.clone(),
            message: e.to_string(),
        })?;
        let entry_path = entry
            .path()
            .map_err(|e| FetchError::Archive {
                url: url.clone(),
                message: e.to_string(),
            })?
            .into_owned();
        let base = entry_path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        if base == wanted {
            let mut file = std::fs::File::create(&scratch).map_err(|e| io_err(&scratch, e))?;
            std::io::copy(&mut entry, &mut file).map_err(|e| io_err(&scratch, e))?;
            unpacked = true;
            break;
        }
        if !base.is_empty() {
            found_names.push(base);
        }
    }
    if !unpacked {
        return Err(FetchError::MissingEntry {
            url,
            wanted,
            found: if found_names.is_empty() {
                "nothing".to_string()
            } else {
                found_names.join(", ")
            },
        });
    }

    // Validate before publishing into the cache.
    if let Err(e) = read_matrix_market(&scratch) {
        let _ = std::fs::remove_file(&scratch);
        return Err(FetchError::Invalid(e));
    }
    std::fs::rename(&scratch, &target).map_err(|e| io_err(&target, e))?;
    Ok(target)
}
