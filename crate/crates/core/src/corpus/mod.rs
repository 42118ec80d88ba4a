//! Problem acquisition: Matrix Market files, block partitioning, seeded
//! random generation, collection downloads, and the manifest format that
//! names a batch of problems.
//!
//! [`load_entry`] turns one manifest entry into a [`SaddleProblem`] ready
//! to solve, whichever of the four sources it uses. Square sources (a
//! collection matrix or a local file) are partitioned into blocks and get
//! the consistent right-hand side for which the all-ones vector is the
//! exact solution; block sources carry their own right-hand side file.

pub mod fetch;
pub mod manifest;
pub mod matrix_market;
pub mod partition;
pub mod random;

pub use fetch::{fetch_suitesparse, FetchError, FetchSettings};
pub use manifest::{CorpusEntry, EntrySource, Manifest, ManifestError};
pub use matrix_market::{
    read_matrix_market, read_vector, write_matrix_market, write_vector, MatrixMarketError,
};
pub use partition::{partition_saddle, PartitionError, PartitionedBlocks};
pub use random::{gen_random_saddle, make_rhs, RandomSaddleSpec};

use crate::scheme::{SaddleProblem, SchemeError};
use crate::sparse::SparseMatrix;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    MatrixMarket(#[from] MatrixMarketError),
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("entry {entry}: {message}")]
    Entry { entry: String, message: String },
}

/// A problem ready to solve, tagged with its manifest name. The warning,
/// when present, reports stored values that the block split had to
/// discard from the structurally zero trailing block.
#[derive(Debug)]
pub struct LoadedProblem {
    pub name: String,
    pub problem: SaddleProblem,
    pub partition_warning: Option<String>,
}

fn block_path(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

fn split_square(
    w: &SparseMatrix,
    n: usize,
    m: usize,
) -> Result<(SparseMatrix, SparseMatrix, SparseMatrix, Option<String>), CorpusError> {
    let blocks = partition_saddle(w, n, m)?;
    let warning = (blocks.discarded_nnz > 0).then(|| {
        format!(
            "discarded {} stored entries from the trailing zero block",
            blocks.discarded_nnz
        )
    });
    Ok((blocks.a, blocks.b, blocks.c, warning))
}

/// Loads one manifest entry: fetches, reads, partitions, or generates as
/// the entry's source dictates, then validates any case label it carries.
pub fn load_entry(
    entry: &CorpusEntry,
    settings: &FetchSettings,
) -> Result<LoadedProblem, CorpusError> {
    let hint = entry.case_hint()?;
    let (a, b, c, f, g, warning) = match entry.source()? {
        EntrySource::Remote { group, n, m } => {
            let path = fetch_suitesparse(group, &entry.name, settings)?;
            let w = read_matrix_market(&path)?;
            let (a, b, c, warning) = split_square(&w, n, m)?;
            let (f, g) = make_rhs(&a, &b, &c);
            (a, b, c, f, g, warning)
        }
        EntrySource::File { path, n, m } => {
            let w = read_matrix_market(path)?;
            let (a, b, c, warning) = split_square(&w, n, m)?;
            let (f, g) = make_rhs(&a, &b, &c);
            (a, b, c, f, g, warning)
        }
        EntrySource::Blocks { prefix } => {
            let a = read_matrix_market(block_path(prefix, "A.mtx"))?;
            let b = read_matrix_market(block_path(prefix, "B.mtx"))?;
            let c = read_matrix_market(block_path(prefix, "C.mtx"))?;
            let rhs = read_vector(block_path(prefix, "rhs.mtx"))?;
            let (n, m) = (a.nrows(), b.ncols());
            if rhs.len() != n + m {
                return Err(CorpusError::Entry {
                    entry: entry.name.clone(),
                    message: format!(
                        "right-hand side has {} entries, blocks need n + m = {} + {}",
                        rhs.len(),
                        n,
                        m
                    ),
                });
            }
            let g = rhs[n..].to_vec();
            let mut f = rhs;
            f.truncate(n);
            (a, b, c, f, g, None)
        }
        EntrySource::Random(spec) => {
            let p = gen_random_saddle(spec)?;
            (p.a, p.b, p.c, p.f, p.g, None)
        }
    };
    let problem = match hint {
        Some(case) => SaddleProblem::with_case(a, b, c, f, g, case)?,
        None => SaddleProblem::new(a, b, c, f, g)?,
    };
    Ok(LoadedProblem {
        name: entry.name.clone(),
        problem,
        partition_warning: warning,
    })
}
