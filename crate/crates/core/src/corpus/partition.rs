//! Splits a square saddle matrix into its blocks.

use crate::sparse::SparseMatrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("matrix order {order} does not equal n + m = {n} + {m}")]
    Order { order: usize, n: usize, m: usize },
    #[error("matrix is {nrows}x{ncols}, partitioning needs a square matrix")]
    NotSquare { nrows: usize, ncols: usize },
}

/// Blocks of a partitioned saddle matrix. The trailing diagonal block is
/// required to be zero by the block structure; any stored values found
/// there are discarded and counted in `discarded_nnz` so callers can warn.
#[derive(Debug)]
pub struct PartitionedBlocks {
    pub a: SparseMatrix,
    pub b: SparseMatrix,
    pub c: SparseMatrix,
    pub discarded_nnz: usize,
}

/// Splits a square matrix of order `n + m` as
///
/// ```text
/// [ A     B ]
/// [ -C^T  0 ]
/// ```
///
/// so `A` is the leading n-by-n block, `B` the n-by-m block beside it, and
/// `C` is recovered from the lower-left block with its sign flipped.
pub fn partition_saddle(
    w: &SparseMatrix,
    n: usize,
    m: usize,
) -> Result<PartitionedBlocks, PartitionError> {
    if w.nrows() != w.ncols() {
        return Err(PartitionError::NotSquare {
            nrows: w.nrows(),
            ncols: w.ncols(),
        });
    }
    if w.nrows() != n + m {
        return Err(PartitionError::Order {
            order: w.nrows(),
            n,
            m,
        });
    }

    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    let mut discarded = 0usize;
    for (i, j, v) in w.triplet_iter() {
        match (i < n, j < n) {
            (true, true) => a.push((i, j, v)),
            (true, false) => b.push((i, j - n, v)),
            (false, true) => c.push((j, i - n, -v)),
            (false, false) => {
                if v != 0.0 {
                    discarded += 1;
                }
            }
        }
    }

    Ok(PartitionedBlocks {
        a: SparseMatrix::from_triplets(n, n, &a).expect("quadrant indices are in range"),
        b: SparseMatrix::from_triplets(n, m, &b).expect("quadrant indices are in range"),
        c: SparseMatrix::from_triplets(n, m, &c).expect("quadrant indices are in range"),
        discarded_nnz: discarded,
    })
}
