//! Sparse approximate nullspace bases.
//!
//! [`saroc`] runs a pivoted conjugation pass over the identity: for each
//! column `b_i` of `B` it picks the remaining candidate with the largest
//! coupling `|b_i^T v|` as pivot and subtracts multiples of it from every
//! trailing candidate whose relative coefficient exceeds `rho`, dropping
//! updated entries below `tau` times the updated column norm. The
//! candidates never touched again span an (approximate) nullspace of
//! `B^T`. With `rho = tau = 0` the basis is exact and `B^T V` is lower
//! trapezoidal in the pivoted order.
//!
//! [`mgs_m_orthonormalize`] post-processes such a basis: a windowed
//! modified Gram-Schmidt pass in the inner product induced by a symmetric
//! positive definite operator `M`, with the same drop rule applied once per
//! column.

use crate::operator::LinearOperator;
use crate::sparse::{SparseMatrix, SparseVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OrthoError {
    /// `z^T M z <= 0` for the column being normalized: the operator is not
    /// positive definite on the basis span (or dropping emptied the column).
    #[error("non-positive M-norm {value:.3e} at basis column {column}")]
    NonPositiveNorm { column: usize, value: f64 },
}

/// Parameters of the conjugation pass. `rho` gates which trailing columns
/// are updated (strict `|sigma_j / sigma_1| > rho`), `tau` is the relative
/// drop tolerance of the update kernel, and `rank_tol` declares a column of
/// `B` dependent when its largest coupling is at most
/// `rank_tol * ||b_i||_2 * max_j ||v_j||_2`.
#[derive(Clone, Copy, Debug)]
pub struct SarocParams {
    pub rho: f64,
    pub tau: f64,
    pub rank_tol: f64,
}

impl SarocParams {
    pub fn new(rho: f64, tau: f64) -> Self {
        SarocParams {
            rho,
            tau,
            rank_tol: 1e-12,
        }
    }

    /// Exact mode: every nonzero coupling is eliminated, nothing is dropped.
    pub fn exact() -> Self {
        SarocParams::new(0.0, 0.0)
    }
}

/// Output of [`saroc`].
#[derive(Clone, Debug)]
pub struct NullspaceBasis {
    /// The n-by-(n - k) basis whose columns satisfy `B^T z ~ 0`.
    pub basis: SparseMatrix,
    /// Detected rank k of `B`.
    pub effective_rank: usize,
    /// Accepted pivots as `(front_position, chosen_position)` swaps, in
    /// order. Replaying them on `0..n` reproduces the candidate order.
    pub pivot_log: Vec<(usize, usize)>,
    /// Columns of `B` declared dependent and skipped.
    pub skipped_columns: Vec<usize>,
}

impl NullspaceBasis {
    pub fn nnz(&self) -> usize {
        self.basis.nnz()
    }
}

/// Builds a sparse approximate nullspace basis for `B^T` (`B` is n-by-m
/// with m <= n). See the module docs for the pass; the returned basis has
/// `n - effective_rank` columns.
pub fn saroc(b: &SparseMatrix, params: &SarocParams) -> NullspaceBasis {
    let pass = conjugation_pass(b, params);
    NullspaceBasis {
        basis: SparseMatrix::from_columns(b.nrows(), &pass.candidates[pass.front..]),
        effective_rank: pass.front,
        pivot_log: pass.pivot_log,
        skipped_columns: pass.skipped,
    }
}

/// Result of the conjugation pass over all n candidates: the full
/// candidate set with the first `front` columns spanning the range.
struct ConjugationPass {
    candidates: Vec<SparseVector>,
    front: usize,
    pivot_log: Vec<(usize, usize)>,
    skipped: Vec<usize>,
}

fn conjugation_pass(b: &SparseMatrix, params: &SarocParams) -> ConjugationPass {
    let n = b.nrows();
    let m = b.ncols();
    assert!(m <= n, "B must be tall: got {n}x{m}");

    let mut v: Vec<SparseVector> = (0..n).map(|i| SparseVector::unit(n, i)).collect();
    let mut front = 0usize;
    let mut pivot_log = Vec::new();
    let mut skipped = Vec::new();
    let mut dense_b = vec![0.0f64; n];

    for ci in 0..m {
        let bc = b.col_vector(ci);
        bc.scatter_into(&mut dense_b);

        // Couplings of this B-column with every remaining candidate, and
        // the candidate norms for the dependence test.
        let mut best = 0usize;
        let mut best_abs = -1.0f64;
        let mut max_col_norm = 0.0f64;
        let sigmas: Vec<f64> = v[front..]
            .iter()
            .map(|col| col.dot_dense(&dense_b))
            .collect();
        for (l, (col, sig)) in v[front..].iter().zip(&sigmas).enumerate() {
            max_col_norm = max_col_norm.max(col.norm2());
            if sig.abs() > best_abs {
                best_abs = sig.abs();
                best = l;
            }
        }

        for (i, _) in bc.iter() {
            dense_b[i] = 0.0;
        }

        if best_abs <= params.rank_tol * bc.norm2() * max_col_norm {
            skipped.push(ci);
            continue;
        }

        v.swap(front, front + best);
        pivot_log.push((front, front + best));
        let sigma1 = sigmas[best];
        let pivot = v[front].clone();
        for (l, sig) in sigmas.iter().enumerate() {
            if l == best {
                continue;
            }
            // Candidate now sitting at front + l (the swap moved the old
            // front column to where the pivot was).
            let pos = if l == 0 { front + best } else { front + l };
            let ratio = sig / sigma1;
            if ratio.abs() > params.rho {
                v[pos] = v[pos].axpy_drop(-ratio, &pivot, params.tau);
            }
        }
        front += 1;
    }

    ConjugationPass {
        candidates: v,
        front,
        pivot_log,
        skipped,
    }
}

/// Scale-invariant residual `||B^T Z||_inf / (||B||_inf ||Z||_inf)`
/// measuring how well `Z` annihilates `B^T`. Returns zero for an empty
/// basis.
pub fn nullspace_residual(b: &SparseMatrix, z: &SparseMatrix) -> f64 {
    assert_eq!(b.nrows(), z.nrows(), "basis and matrix row mismatch");
    let denom = b.norm_inf() * z.norm_inf();
    if denom == 0.0 {
        return 0.0;
    }
    // inf-norm of B^T Z = max over rows i (columns b_i of B) of
    // sum_j |b_i^T z_j|.
    let mut rowsum = vec![0.0f64; b.ncols()];
    for j in 0..z.ncols() {
        let zj = z.col_vector(j).to_dense();
        for (i, s) in b.matvec_transpose(&zj).iter().enumerate() {
            rowsum[i] += s.abs();
        }
    }
    rowsum.into_iter().fold(0.0, f64::max) / denom
}

/// Windowed modified Gram-Schmidt in the M-inner product. Each column is
/// orthogonalized against at most the previous `window` accepted columns,
/// entries below `drop_tol` times the column 2-norm are dropped once per
/// column (after the projections, before normalization), and the column is
/// then M-normalized. `m_op` must be symmetric; cached `M z` products turn
/// each projection coefficient into a sparse-dense dot.
pub fn mgs_m_orthonormalize(
    z: &SparseMatrix,
    m_op: &dyn LinearOperator,
    window: usize,
    drop_tol: f64,
) -> Result<SparseMatrix, OrthoError> {
    let n = z.nrows();
    assert_eq!(m_op.nrows(), n, "M operator dimension mismatch");
    assert_eq!(m_op.ncols(), n, "M operator must be square");

    let mut kept: Vec<SparseVector> = Vec::with_capacity(z.ncols());
    let mut cache: std::collections::VecDeque<(SparseVector, Vec<f64>)> =
        std::collections::VecDeque::new();
    let mut dense = vec![0.0f64; n];
    let mut m_dense = vec![0.0f64; n];

    for i in 0..z.ncols() {
        let mut zi = z.col_vector(i);
        // Projections against the window, oldest first, each using the
        // current (already updated) column: with M symmetric,
        // (M z_j)^T z_i equals z_j^T M z_i.
        for (zj, mzj) in cache.iter() {
            let coef = zi.dot_dense(mzj);
            zi = zi.axpy_drop(-coef, zj, 0.0);
        }
        zi.drop_below(drop_tol);

        for d in dense.iter_mut() {
            *d = 0.0;
        }
        zi.scatter_into(&mut dense);
        m_op.apply_into(&dense, &mut m_dense);
        let norm2_m = zi.dot_dense(&m_dense);
        if norm2_m <= 0.0 {
            return Err(OrthoError::NonPositiveNorm {
                column: i,
                value: norm2_m,
            });
        }
        let inv = 1.0 / norm2_m.sqrt();
        zi.scale(inv);
        let mzi: Vec<f64> = m_dense.iter().map(|t| t * inv).collect();

        cache.push_back((zi.clone(), mzi));
        if cache.len() > window {
            cache.pop_front();
        }
        kept.push(zi);
    }

    Ok(SparseMatrix::from_columns(n, &kept))
}
