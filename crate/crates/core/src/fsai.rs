//! Factored sparse approximate inverse of a symmetric positive definite
//! operator.
//!
//! Given `N` (typically available only as an operator), [`fsai`] builds a
//! sparse upper-triangular `W` with `W^T N W ~ I` by conjugating the
//! identity columns against the columns of `N` one at a time. With a zero
//! relative threshold the result is the exact inverse Cholesky factor. The
//! pass visits column `j`, uses the current candidate `w_j` as pivot,
//! updates every later candidate whose relative coefficient exceeds `rho`,
//! and finally rescales all pivots so the conjugated operator has unit
//! diagonal.

use crate::operator::{LinearOperator, Op};
use crate::sparse::{SparseMatrix, SparseVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FsaiError {
    /// A pivot `w_j^T N w_j` fell below the positivity floor; the operator
    /// is not positive definite on the working subspace.
    #[error("pivot {pivot:.3e} at column {column} is not positive; the operator is not positive definite there")]
    NotPositiveDefinite { column: usize, pivot: f64 },
}

/// Parameters of the conjugation pass: `rho` gates updates of later
/// candidates (strict `|sigma_i / sigma_j| > rho`), `tau` is the relative
/// drop tolerance applied by the update kernel.
#[derive(Clone, Copy, Debug)]
pub struct FsaiParams {
    pub rho: f64,
    pub tau: f64,
}

impl FsaiParams {
    pub fn new(rho: f64, tau: f64) -> Self {
        FsaiParams { rho, tau }
    }

    /// Exact mode: the result is the inverse upper Cholesky factor.
    pub fn exact() -> Self {
        FsaiParams::new(0.0, 0.0)
    }
}

/// Output of [`fsai`]: the factor and the per-column pivots accepted while
/// building it (before the final rescale).
#[derive(Clone, Debug)]
pub struct FsaiFactor {
    pub w: SparseMatrix,
    pub pivots: Vec<f64>,
}

impl FsaiFactor {
    pub fn nnz(&self) -> usize {
        self.w.nnz()
    }
}

/// Relative floor under which a pivot is declared non-positive rather than
/// divided by.
const PIVOT_FLOOR: f64 = 1e-14;

/// Builds the factored approximate inverse of the symmetric positive
/// definite operator `ns`. Only operator-vector products with unit vectors
/// are used, so `ns` may be an implicit product.
pub fn fsai(ns: &dyn LinearOperator, params: &FsaiParams) -> Result<FsaiFactor, FsaiError> {
    let d = ns.nrows();
    assert_eq!(ns.ncols(), d, "operator must be square");

    let mut w: Vec<SparseVector> = (0..d).map(|i| SparseVector::unit(d, i)).collect();
    let mut pivots = Vec::with_capacity(d);
    let mut unit = vec![0.0f64; d];
    let mut ns_col = vec![0.0f64; d];

    for j in 0..d {
        unit[j] = 1.0;
        ns.apply_into(&unit, &mut ns_col);
        unit[j] = 0.0;

        let floor = PIVOT_FLOOR * ns_col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sigma_j = w[j].dot_dense(&ns_col);
        if sigma_j <= floor {
            return Err(FsaiError::NotPositiveDefinite {
                column: j,
                pivot: sigma_j,
            });
        }

        let pivot = w[j].clone();
        for wi in w[j + 1..].iter_mut() {
            let sigma_i = wi.dot_dense(&ns_col);
            let ratio = sigma_i / sigma_j;
            if ratio.abs() > params.rho {
                *wi = wi.axpy_drop(-ratio, &pivot, params.tau);
            }
        }
        pivots.push(sigma_j);
    }

    for (wj, &sigma) in w.iter_mut().zip(&pivots) {
        wj.scale(1.0 / sigma.sqrt());
    }

    Ok(FsaiFactor {
        w: SparseMatrix::from_columns(d, &w),
        pivots,
    })
}

/// Wraps an operator on the conjugated space: `W^T inner W`.
pub fn apply_split_preconditioned(inner: Op, w: &SparseMatrix) -> Op {
    let w_op = Op::from_sparse(std::sync::Arc::new(w.clone()), "W");
    w_op.transpose().product(&inner).product(&w_op)
}
