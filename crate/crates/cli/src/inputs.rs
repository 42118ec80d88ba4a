//! Turning a matrix file into a saddle problem: partition inference for
//! square saddle matrices and the shared loading path of `solve` and
//! `validate`.

use crate::error::CliError;
use saddle_core::corpus::{make_rhs, partition_saddle, read_matrix_market};
use saddle_core::{SaddleCase, SaddleProblem, SparseMatrix};
use std::path::Path;

/// The largest trailing square block holding no stored entries, returned
/// as `(n, m)`. That is the natural partition of a saddle matrix whose
/// trailing block is structurally zero; `None` when the last diagonal
/// position is occupied (or the matrix stores nothing at all).
pub fn infer_partition(w: &SparseMatrix) -> Option<(usize, usize)> {
    let order = w.nrows();
    if w.nnz() == 0 {
        return None;
    }
    // An entry (i, j) occupies every trailing block of size m >= order - min(i, j).
    let deepest = w
        .triplet_iter()
        .map(|(i, j, _)| i.min(j))
        .max()
        .expect("nnz > 0");
    let m = order - 1 - deepest;
    (m > 0).then_some((order - m, m))
}

pub struct MatrixInput {
    /// The file stem, used as the problem name in summaries and rows.
    pub name: String,
    pub problem: SaddleProblem,
    /// Stored values discarded from the trailing zero block, if any.
    pub partition_warning: Option<String>,
    /// Set when the partition was inferred rather than given.
    pub inferred: Option<(usize, usize)>,
}

/// Reads a square saddle matrix file and splits it into a problem. The
/// partition comes from the flags when given, otherwise from
/// [`infer_partition`]; the right-hand side is built so the all-ones
/// vector solves the system exactly.
pub fn load_square_matrix(
    path: &Path,
    partition: Option<(usize, usize)>,
    case: Option<SaddleCase>,
) -> Result<MatrixInput, CliError> {
    let w = read_matrix_market(path)?;
    if w.nrows() != w.ncols() {
        return Err(CliError::usage(format!(
            "{}: a saddle matrix must be square, got {} x {}",
            path.display(),
            w.nrows(),
            w.ncols()
        )));
    }
    let (given, inferred) = match partition {
        Some(nm) => (nm, None),
        None => {
            let nm = infer_partition(&w).ok_or_else(|| {
                CliError::usage(format!(
                    "{}: cannot infer a partition (no trailing zero block); pass --n and --m",
                    path.display()
                ))
            })?;
            (nm, Some(nm))
        }
    };
    let (n, m) = given;
    let blocks = partition_saddle(&w, n, m).map_err(|e| CliError::usage(e.to_string()))?;
    let partition_warning = (blocks.discarded_nnz > 0).then(|| {
        format!(
            "discarded {} stored entries from the trailing zero block",
            blocks.discarded_nnz
        )
    });
    let (f, g) = make_rhs(&blocks.a, &blocks.b, &blocks.c);
    let problem = match case {
        Some(case) => SaddleProblem::with_case(blocks.a, blocks.b, blocks.c, f, g, case)?,
        None => SaddleProblem::new(blocks.a, blocks.b, blocks.c, f, g)?,
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(MatrixInput {
        name,
        problem,
        partition_warning,
        inferred,
    })
}
