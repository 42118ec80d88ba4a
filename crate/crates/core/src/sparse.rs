//! Compressed sparse column storage and the sparse-vector kernels shared by
//! the factorization passes.
//!
//! Invariants maintained everywhere:
//! - row indices strictly increase within each column,
//! - drop passes never leave an exactly-zero stored value,
//! - accumulation order in products is fixed (ascending column, then
//!   ascending row), so repeated applications are bit-identical.

use thiserror::Error;

/// Construction failures for sparse containers. Dimension mismatches during
/// application (e.g. a matvec with a wrong-length vector) are contract
/// violations and panic instead.
#[derive(Debug, Error, PartialEq)]
pub enum SparseError {
    #[error("entry ({row}, {col}) out of range for a {nrows}x{ncols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error("invalid CSC structure: {0}")]
    BadStructure(String),
}

/// Sparse column vector: strictly increasing indices, no stored zeros
/// (construction may carry explicit zeros only until the first drop pass).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVector {
    dim: usize,
    idx: Vec<usize>,
    val: Vec<f64>,
}

impl SparseVector {
    pub fn new(dim: usize) -> Self {
        SparseVector {
            dim,
            idx: Vec::new(),
            val: Vec::new(),
        }
    }

    /// The `i`-th column of the identity.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim, "unit index {i} out of range for dimension {dim}");
        SparseVector {
            dim,
            idx: vec![i],
            val: vec![1.0],
        }
    }

    /// Builds from unordered `(index, value)` pairs; duplicates are summed,
    /// exact zeros after summation are discarded.
    pub fn from_entries(dim: usize, entries: &[(usize, f64)]) -> Result<Self, SparseError> {
        let mut pairs: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for &(i, v) in entries {
            if i >= dim {
                return Err(SparseError::IndexOutOfRange {
                    row: i,
                    col: 0,
                    nrows: dim,
                    ncols: 1,
                });
            }
            pairs.push((i, v));
        }
        pairs.sort_by_key(|&(i, _)| i);
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for (i, v) in pairs {
            if idx.last() == Some(&i) {
                *val.last_mut().unwrap() += v;
            } else {
                idx.push(i);
                val.push(v);
            }
        }
        let mut out = SparseVector { dim, idx, val };
        out.purge_zeros();
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.idx.iter().copied().zip(self.val.iter().copied())
    }

    pub fn norm2(&self) -> f64 {
        self.val.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.val {
            *v *= s;
        }
        if s == 0.0 {
            self.purge_zeros();
        }
    }

    /// Dot product against a dense vector of the same dimension.
    pub fn dot_dense(&self, x: &[f64]) -> f64 {
        assert_eq!(
            x.len(),
            self.dim,
            "dense operand length {} does not match sparse dimension {}",
            x.len(),
            self.dim
        );
        self.iter().map(|(i, v)| v * x[i]).sum()
    }

    /// Dot product against another sparse vector (index merge).
    pub fn dot(&self, other: &SparseVector) -> f64 {
        assert_eq!(self.dim, other.dim, "sparse dot dimension mismatch");
        let (mut p, mut q, mut acc) = (0usize, 0usize, 0.0f64);
        while p < self.idx.len() && q < other.idx.len() {
            match self.idx[p].cmp(&other.idx[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.val[p] * other.val[q];
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }

    /// Scatter into a dense vector (overwrites only the stored positions;
    /// the caller clears the buffer between uses).
    pub fn scatter_into(&self, dense: &mut [f64]) {
        assert_eq!(dense.len(), self.dim);
        for (i, v) in self.iter() {
            dense[i] = v;
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.scatter_into(&mut out);
        out
    }

    /// The shared update-then-drop kernel: returns `self + alpha * source`
    /// with every entry whose magnitude falls below `tau` times the 2-norm
    /// of the *updated* vector removed. The norm is taken after the update
    /// and before any dropping; exact zeros never survive.
    pub fn axpy_drop(&self, alpha: f64, source: &SparseVector, tau: f64) -> SparseVector {
        assert_eq!(self.dim, source.dim, "axpy_drop dimension mismatch");
        let mut idx = Vec::with_capacity(self.idx.len() + source.idx.len());
        let mut val = Vec::with_capacity(self.idx.len() + source.idx.len());
        let (mut p, mut q) = (0usize, 0usize);
        while p < self.idx.len() || q < source.idx.len() {
            let take_self =
                q >= source.idx.len() || (p < self.idx.len() && self.idx[p] < source.idx[q]);
            let take_source =
                p >= self.idx.len() || (q < source.idx.len() && source.idx[q] < self.idx[p]);
            let (i, v) = if take_self {
                let e = (self.idx[p], self.val[p]);
                p += 1;
                e
            } else if take_source {
                let e = (source.idx[q], alpha * source.val[q]);
                q += 1;
                e
            } else {
                let e = (self.idx[p], self.val[p] + alpha * source.val[q]);
                p += 1;
                q += 1;
                e
            };
            if v != 0.0 {
                idx.push(i);
                val.push(v);
            }
        }
        let mut out = SparseVector {
            dim: self.dim,
            idx,
            val,
        };
        out.drop_below(tau);
        out
    }

    /// The drop stage of the kernel alone: removes entries with
    /// `|entry| < tau * ||self||_2` (and exact zeros regardless of `tau`).
    pub fn drop_below(&mut self, tau: f64) {
        let threshold = tau * self.norm2();
        let mut keep = 0usize;
        for k in 0..self.idx.len() {
            let v = self.val[k];
            if v != 0.0 && v.abs() >= threshold {
                self.idx[keep] = self.idx[k];
                self.val[keep] = v;
                keep += 1;
            }
        }
        self.idx.truncate(keep);
        self.val.truncate(keep);
    }

    fn purge_zeros(&mut self) {
        self.drop_below(0.0);
    }
}

/// Compressed sparse column matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    colptr: Vec<usize>,
    rowidx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets in any order. Duplicate
    /// coordinates are summed; values that sum to exactly zero are kept so
    /// that file round-trips preserve explicitly stored zeros.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self, SparseError> {
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(SparseError::IndexOutOfRange {
                    row: r,
                    col: c,
                    nrows,
                    ncols,
                });
            }
        }
        // Stable sort by (column, row) keeps duplicate summation in input
        // order, so assembly is deterministic.
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&k| (triplets[k].1, triplets[k].0));
        let mut colptr = vec![0usize; ncols + 1];
        let mut rowidx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for &k in &order {
            let (r, c, v) = triplets[k];
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                rowidx.push(r);
                values.push(v);
                colptr[c + 1] += 1;
                last = Some((r, c));
            }
        }
        for c in 0..ncols {
            colptr[c + 1] += colptr[c];
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            colptr,
            rowidx,
            values,
        })
    }

    /// Builds from raw CSC arrays, validating the structural invariants.
    pub fn from_parts(
        nrows: usize,
        ncols: usize,
        colptr: Vec<usize>,
        rowidx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self, SparseError> {
        if colptr.len() != ncols + 1 {
            return Err(SparseError::BadStructure(format!(
                "colptr length {} != ncols + 1 = {}",
                colptr.len(),
                ncols + 1
            )));
        }
        if rowidx.len() != values.len() {
            return Err(SparseError::BadStructure(format!(
                "rowidx length {} != values length {}",
                rowidx.len(),
                values.len()
            )));
        }
        if colptr[0] != 0 || *colptr.last().unwrap() != rowidx.len() {
            return Err(SparseError::BadStructure(
                "colptr must start at 0 and end at nnz".into(),
            ));
        }
        for c in 0..ncols {
            if colptr[c] > colptr[c + 1] {
                return Err(SparseError::BadStructure(format!(
                    "colptr decreases at column {c}"
                )));
            }
            for k in colptr[c]..colptr[c + 1] {
                if rowidx[k] >= nrows {
                    return Err(SparseError::IndexOutOfRange {
                        row: rowidx[k],
                        col: c,
                        nrows,
                        ncols,
                    });
                }
                if k > colptr[c] && rowidx[k - 1] >= rowidx[k] {
                    return Err(SparseError::BadStructure(format!(
                        "row indices not strictly increasing in column {c}"
                    )));
                }
            }
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            colptr,
            rowidx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            colptr: (0..=n).collect(),
            rowidx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            colptr: vec![0; ncols + 1],
            rowidx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from dense rows; zeros are not stored.
    pub fn from_dense(rows: &[&[f64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense rows");
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(nrows, ncols, &triplets).unwrap()
    }

    /// Assembles columns (all of the same dimension) into a matrix.
    pub fn from_columns(nrows: usize, cols: &[SparseVector]) -> Self {
        let mut colptr = Vec::with_capacity(cols.len() + 1);
        colptr.push(0usize);
        let nnz: usize = cols.iter().map(|c| c.nnz()).sum();
        let mut rowidx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for col in cols {
            assert_eq!(col.dim(), nrows, "column dimension mismatch");
            for (i, v) in col.iter() {
                rowidx.push(i);
                values.push(v);
            }
            colptr.push(rowidx.len());
        }
        SparseMatrix {
            nrows,
            ncols: cols.len(),
            colptr,
            rowidx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rowidx.len()
    }

    /// Row indices and values of column `j`.
    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        assert!(j < self.ncols, "column {j} out of range");
        let span = self.colptr[j]..self.colptr[j + 1];
        (&self.rowidx[span.clone()], &self.values[span])
    }

    pub fn col_vector(&self, j: usize) -> SparseVector {
        let (idx, val) = self.col(j);
        SparseVector {
            dim: self.nrows,
            idx: idx.to_vec(),
            val: val.to_vec(),
        }
    }

    pub fn columns(&self) -> Vec<SparseVector> {
        (0..self.ncols).map(|j| self.col_vector(j)).collect()
    }

    /// Value at `(i, j)`; zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (idx, val) = self.col(j);
        match idx.binary_search(&i) {
            Ok(k) => val[k],
            Err(_) => 0.0,
        }
    }

    pub fn triplet_iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.ncols).flat_map(move |j| {
            let (idx, val) = self.col(j);
            idx.iter().zip(val.iter()).map(move |(&i, &v)| (i, j, v))
        })
    }

    /// `y = self * x` with a fixed accumulation order (columns ascending,
    /// rows ascending within a column).
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(
            x.len(),
            self.ncols,
            "matvec operand length {} does not match ncols {}",
            x.len(),
            self.ncols
        );
        let mut y = vec![0.0; self.nrows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            let (idx, val) = self.col(j);
            for (&i, &v) in idx.iter().zip(val.iter()) {
                y[i] += v * xj;
            }
        }
        y
    }

    /// `y = self^T * x`, same deterministic ordering.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(
            x.len(),
            self.nrows,
            "matvec_transpose operand length {} does not match nrows {}",
            x.len(),
            self.nrows
        );
        let mut y = vec![0.0; self.ncols];
        for (j, yj) in y.iter_mut().enumerate() {
            let (idx, val) = self.col(j);
            let mut acc = 0.0;
            for (&i, &v) in idx.iter().zip(val.iter()) {
                acc += v * x[i];
            }
            *yj = acc;
        }
        y
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.nrows + 1];
        for &i in &self.rowidx {
            counts[i + 1] += 1;
        }
        for i in 0..self.nrows {
            counts[i + 1] += counts[i];
        }
        let colptr = counts.clone();
        let mut rowidx = vec![0usize; self.nnz()];
        let mut values = vec![0.0f64; self.nnz()];
        let mut next = counts;
        for j in 0..self.ncols {
            let (idx, val) = self.col(j);
            for (&i, &v) in idx.iter().zip(val.iter()) {
                let slot = next[i];
                rowidx[slot] = j;
                values[slot] = v;
                next[i] += 1;
            }
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            colptr,
            rowidx,
            values,
        }
    }

    /// `alpha * self + beta * other`, discarding exact zeros produced by
    /// cancellation.
    pub fn add_scaled(&self, alpha: f64, other: &SparseMatrix, beta: f64) -> SparseMatrix {
        assert_eq!(self.nrows, other.nrows, "add_scaled row mismatch");
        assert_eq!(self.ncols, other.ncols, "add_scaled column mismatch");
        let mut colptr = Vec::with_capacity(self.ncols + 1);
        colptr.push(0usize);
        let mut rowidx = Vec::new();
        let mut values = Vec::new();
        for j in 0..self.ncols {
            let (ai, av) = self.col(j);
            let (bi, bv) = other.col(j);
            let (mut p, mut q) = (0usize, 0usize);
            while p < ai.len() || q < bi.len() {
                let (i, v) = if q >= bi.len() || (p < ai.len() && ai[p] < bi[q]) {
                    let e = (ai[p], alpha * av[p]);
                    p += 1;
                    e
                } else if p >= ai.len() || bi[q] < ai[p] {
                    let e = (bi[q], beta * bv[q]);
                    q += 1;
                    e
                } else {
                    let e = (ai[p], alpha * av[p] + beta * bv[q]);
                    p += 1;
                    q += 1;
                    e
                };
                if v != 0.0 {
                    rowidx.push(i);
                    values.push(v);
                }
            }
            colptr.push(rowidx.len());
        }
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            colptr,
            rowidx,
            values,
        }
    }

    pub fn scaled(&self, s: f64) -> SparseMatrix {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= s;
        }
        out
    }

    /// Splits a square matrix into its symmetric and skew-symmetric parts
    /// `(A + A^T)/2` and `(A - A^T)/2`. The symmetric part is pattern- and
    /// value-exactly symmetric, the skew part exactly antisymmetric, because
    /// mirrored entries are formed from the same two addends.
    pub fn symmetric_split(&self) -> (SparseMatrix, SparseMatrix) {
        assert_eq!(
            self.nrows, self.ncols,
            "symmetric_split needs a square matrix"
        );
        let t = self.transpose();
        let sym = self.add_scaled(0.5, &t, 0.5);
        let skew = self.add_scaled(0.5, &t, -0.5);
        (sym, skew)
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rowsum = vec![0.0f64; self.nrows];
        for (i, _, v) in self.triplet_iter() {
            rowsum[i] += v.abs();
        }
        rowsum.into_iter().fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn norm_max(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(dim: usize, entries: &[(usize, f64)]) -> SparseVector {
        SparseVector::from_entries(dim, entries).unwrap()
    }

    #[test]
    fn axpy_drop_cancels_to_empty() {
        let t = sv(2, &[(0, 1.0)]);
        let s = sv(2, &[(0, 1.0)]);
        let r = t.axpy_drop(-1.0, &s, 0.0);
        assert_eq!(r.nnz(), 0);
    }

    #[test]
    fn axpy_drop_norm_is_taken_after_update() {
        // Result before dropping is (3, 4) with 2-norm 5. tau = 0.7 puts the
        // threshold at 3.5: the 3 goes, the 4 stays.
        let t = sv(2, &[(0, 3.0)]);
        let s = sv(2, &[(1, 2.0)]);
        let r = t.axpy_drop(2.0, &s, 0.7);
        assert_eq!(r.to_dense(), vec![0.0, 4.0]);
        // tau = 0.8 -> threshold 4.0; |4| >= 4.0 is kept (strict drop).
        let r = t.axpy_drop(2.0, &s, 0.8);
        assert_eq!(r.to_dense(), vec![0.0, 4.0]);
        // tau = 0.81 -> threshold 4.05; everything goes.
        let r = t.axpy_drop(2.0, &s, 0.81);
        assert_eq!(r.nnz(), 0);
    }

    #[test]
    fn axpy_drop_with_zero_tau_keeps_small_entries() {
        let t = sv(3, &[(0, 1.0), (2, 1e-300)]);
        let s = sv(3, &[(1, 1.0)]);
        let r = t.axpy_drop(1.0, &s, 0.0);
        assert_eq!(r.nnz(), 3);
    }

    #[test]
    fn from_entries_sums_duplicates_and_purges_zeros() {
        let v = sv(4, &[(2, 1.0), (2, 2.0), (0, 5.0), (0, -5.0)]);
        assert_eq!(v.nnz(), 1);
        assert_eq!(v.to_dense(), vec![0.0, 0.0, 3.0, 0.0]);
    }

    #[test]
    fn sparse_dot_merges_indices() {
        let a = sv(5, &[(0, 2.0), (3, 1.0), (4, -1.0)]);
        let b = sv(5, &[(1, 7.0), (3, 3.0), (4, 2.0)]);
        assert_eq!(a.dot(&b), 1.0);
        assert_eq!(a.dot_dense(&b.to_dense()), 1.0);
    }

    #[test]
    fn identity_matvec_is_identity() {
        let eye = SparseMatrix::identity(3);
        let x = vec![1.0, -2.0, 0.5];
        assert_eq!(eye.matvec(&x), x);
        assert_eq!(eye.matvec_transpose(&x), x);
    }

    #[test]
    fn matvec_matches_dense_arithmetic() {
        let m = SparseMatrix::from_dense(&[&[1.0, 2.0], &[0.0, -3.0], &[4.0, 0.0]]);
        assert_eq!(m.matvec(&[1.0, 1.0]), vec![3.0, -3.0, 4.0]);
        assert_eq!(m.matvec_transpose(&[1.0, 1.0, 1.0]), vec![5.0, -1.0]);
    }

    #[test]
    fn from_triplets_sums_duplicates() {
        let m =
            SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 1, 4.0)]).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 1), 4.0);
    }

    #[test]
    fn from_triplets_rejects_out_of_range() {
        let err = SparseMatrix::from_triplets(2, 2, &[(2, 0, 1.0)]).unwrap_err();
        assert!(matches!(err, SparseError::IndexOutOfRange { row: 2, .. }));
    }

    #[test]
    fn from_parts_validates_structure() {
        // Row indices must strictly increase within a column.
        let err =
            SparseMatrix::from_parts(2, 1, vec![0, 2], vec![1, 1], vec![1.0, 2.0]).unwrap_err();
        assert!(matches!(err, SparseError::BadStructure(_)));
        let ok = SparseMatrix::from_parts(2, 1, vec![0, 2], vec![0, 1], vec![1.0, 2.0]);
        assert!(ok.is_ok());
    }

    #[test]
    fn transpose_is_involutive() {
        let m = SparseMatrix::from_dense(&[&[1.0, 2.0, 0.0], &[0.0, 3.0, 4.0]]);
        let t = m.transpose();
        assert_eq!(t.nrows(), 3);
        assert_eq!(t.get(1, 0), 2.0);
        assert_eq!(t.transpose(), m);
    }

    #[test]
    fn symmetric_split_of_skew_matrix_has_empty_symmetric_part() {
        let j = SparseMatrix::from_dense(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let (s, k) = j.symmetric_split();
        assert_eq!(s.nnz(), 0);
        assert_eq!(k, j);
    }

    #[test]
    fn symmetric_split_of_symmetric_matrix_has_empty_skew_part() {
        let a = SparseMatrix::from_dense(&[&[1.0, 2.0], &[2.0, 1.0]]);
        let (s, k) = a.symmetric_split();
        assert_eq!(k.nnz(), 0);
        assert_eq!(s, a);
    }

    #[test]
    fn symmetric_split_reconstructs_and_is_exact() {
        let a = SparseMatrix::from_dense(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, -1.0], &[3.0, 0.0, 2.0]]);
        let (s, k) = a.symmetric_split();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(
                    s.get(i, j),
                    s.get(j, i),
                    "symmetric part not exact at ({i},{j})"
                );
                assert_eq!(
                    k.get(i, j),
                    -k.get(j, i),
                    "skew part not exact at ({i},{j})"
                );
                let back = s.get(i, j) + k.get(i, j);
                assert!((back - a.get(i, j)).abs() <= 1e-15 * a.norm_max());
            }
        }
    }

    #[test]
    fn norms() {
        let m = SparseMatrix::from_dense(&[&[1.0, -2.0], &[3.0, 4.0]]);
        assert_eq!(m.norm_inf(), 7.0);
        assert_eq!(m.norm_max(), 4.0);
    }

    #[test]
    fn from_columns_round_trips() {
        let cols = vec![sv(3, &[(0, 1.0), (2, 2.0)]), sv(3, &[(1, -1.0)])];
        let m = SparseMatrix::from_columns(3, &cols);
        assert_eq!(m.ncols(), 2);
        assert_eq!(m.col_vector(0), cols[0]);
        assert_eq!(m.col_vector(1), cols[1]);
    }

    #[test]
    #[should_panic(expected = "matvec operand length")]
    fn matvec_length_mismatch_panics() {
        SparseMatrix::identity(2).matvec(&[1.0]);
    }
}
