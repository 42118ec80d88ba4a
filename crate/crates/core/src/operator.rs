//! Lazily composed linear operators.
//!
//! The solve scheme works with projected operators like `W^T Z^T A Z W`
//! that must never be materialized. [`Op`] wraps any [`LinearOperator`]
//! behind an `Arc` and offers products, sums, scalar multiples, transposes,
//! and identity shifts; application walks the composition tree.
//!
//! Dimension conflicts, at composition time or at application time, are
//! contract violations and panic with the offending descriptor.

use crate::sparse::SparseMatrix;
use std::sync::Arc;

pub trait LinearOperator: Send + Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    /// `y = self * x`. `y` has length `nrows` and is overwritten.
    fn apply_into(&self, x: &[f64], y: &mut [f64]);

    /// `y = self^T * x`. Only called when [`supports_transpose`] holds.
    fn apply_transpose_into(&self, _x: &[f64], _y: &mut [f64]) {
        panic!(
            "{} does not support transpose application",
            self.descriptor()
        );
    }

    fn supports_transpose(&self) -> bool {
        false
    }

    /// Human-readable composition string for diagnostics.
    fn descriptor(&self) -> String;
}

impl LinearOperator for SparseMatrix {
    fn nrows(&self) -> usize {
        SparseMatrix::nrows(self)
    }

    fn ncols(&self) -> usize {
        SparseMatrix::ncols(self)
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(&self.matvec(x));
    }

    fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(&self.matvec_transpose(x));
    }

    fn supports_transpose(&self) -> bool {
        true
    }

    fn descriptor(&self) -> String {
        format!(
            "sparse[{}x{}]",
            SparseMatrix::nrows(self),
            SparseMatrix::ncols(self)
        )
    }
}

/// Cheaply clonable handle to a composed operator.
#[derive(Clone)]
pub struct Op {
    inner: Arc<dyn LinearOperator>,
}

impl Op {
    pub fn new(inner: Arc<dyn LinearOperator>) -> Self {
        Op { inner }
    }

    /// Wraps a sparse matrix under a short name used in descriptors.
    pub fn from_sparse(matrix: Arc<SparseMatrix>, name: impl Into<String>) -> Self {
        Op {
            inner: Arc::new(Named {
                matrix,
                name: name.into(),
            }),
        }
    }

    pub fn identity(n: usize) -> Self {
        Op {
            inner: Arc::new(Identity { n }),
        }
    }

    pub fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn descriptor(&self) -> String {
        self.inner.descriptor()
    }

    pub fn supports_transpose(&self) -> bool {
        self.inner.supports_transpose()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(
            x.len(),
            self.ncols(),
            "operand length {} does not match ncols of {}",
            x.len(),
            self.descriptor()
        );
        let mut y = vec![0.0; self.nrows()];
        self.inner.apply_into(x, &mut y);
        y
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(
            x.len(),
            self.nrows(),
            "transpose operand length {} does not match nrows of {}",
            x.len(),
            self.descriptor()
        );
        let mut y = vec![0.0; self.ncols()];
        self.inner.apply_transpose_into(x, &mut y);
        y
    }

    /// Column `j` of the operator, extracted by applying to a unit vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        assert!(j < self.ncols(), "column {j} out of range");
        let mut e = vec![0.0; self.ncols()];
        e[j] = 1.0;
        self.apply(&e)
    }

    /// `self * rhs` (apply `rhs` first).
    pub fn product(&self, rhs: &Op) -> Op {
        assert_eq!(
            self.ncols(),
            rhs.nrows(),
            "product dimension conflict: {} . {}",
            self.descriptor(),
            rhs.descriptor()
        );
        Op {
            inner: Arc::new(Product {
                a: self.clone(),
                b: rhs.clone(),
            }),
        }
    }

    pub fn add(&self, rhs: &Op) -> Op {
        assert!(
            self.nrows() == rhs.nrows() && self.ncols() == rhs.ncols(),
            "sum dimension conflict: {} + {}",
            self.descriptor(),
            rhs.descriptor()
        );
        Op {
            inner: Arc::new(Sum {
                a: self.clone(),
                b: rhs.clone(),
            }),
        }
    }

    pub fn scale(&self, s: f64) -> Op {
        Op {
            inner: Arc::new(Scale { s, a: self.clone() }),
        }
    }

    pub fn transpose(&self) -> Op {
        assert!(
            self.supports_transpose(),
            "transpose wrap of {} which does not support it",
            self.descriptor()
        );
        Op {
            inner: Arc::new(Transpose { a: self.clone() }),
        }
    }

    /// `s * I + self`; requires a square operator.
    pub fn shift(&self, s: f64) -> Op {
        assert_eq!(
            self.nrows(),
            self.ncols(),
            "shift of non-square {}",
            self.descriptor()
        );
        Op::identity(self.nrows()).scale(s).add(self)
    }

    /// Symmetric part `(self + self^T) / 2` as a lazy composition.
    pub fn symmetrized(&self) -> Op {
        self.add(&self.transpose()).scale(0.5)
    }

    /// Skew part `(self - self^T) / 2` as a lazy composition.
    pub fn skew_part(&self) -> Op {
        self.add(&self.transpose().scale(-1.0)).scale(0.5)
    }
}

impl LinearOperator for Op {
    fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    fn ncols(&self) -> usize {
        self.inner.ncols()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.inner.apply_into(x, y);
    }

    fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        self.inner.apply_transpose_into(x, y);
    }

    fn supports_transpose(&self) -> bool {
        self.inner.supports_transpose()
    }

    fn descriptor(&self) -> String {
        self.inner.descriptor()
    }
}

struct Named {
    matrix: Arc<SparseMatrix>,
    name: String,
}

impl LinearOperator for Named {
    fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(&self.matrix.matvec(x));
    }

    fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(&self.matrix.matvec_transpose(x));
    }

    fn supports_transpose(&self) -> bool {
        true
    }

    fn descriptor(&self) -> String {
        self.name.clone()
    }
}

struct Identity {
    n: usize,
}

impl LinearOperator for Identity {
    fn nrows(&self) -> usize {
        self.n
    }

    fn ncols(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }

    fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }

    fn supports_transpose(&self) -> bool {
        true
    }

    fn descriptor(&self) -> String {
        format!("I[{}]", self.n)
    }
}

struct Product {
    a: Op,
    b: Op,
}

impl LinearOperator for Product {
    fn nrows(&self) -> usize {
        self.a.nrows()
    }

    fn ncols(&self) -> usize {
        self.b.ncols()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let t = self.b.apply(x);
        self.a.inner.apply_into(&t, y);
    }

    fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        let t = self.a.apply_transpose(x);
        self.b.inner.apply_transpose_into(&t, y);
    }

    fn supports_transpose(&self) -> bool {
        self.a.supports_transpose() && self.b.supports_transpose()
    }

    fn descriptor(&self) -> String {
        format!("({}.{})", self.a.descriptor(), self.b.descriptor())
    }
}

struct Sum {
    a: Op,
    b: Op,
}

impl LinearOperator for Sum {
    fn nrows(&self) -> usize {
        self.a.nrows()
    }

    fn ncols(&self) -> usize {
        self.a.ncols()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.a.inner.apply_into(x, y);
        let t = self.b.apply(x);
        for (yi, ti) in y.iter_mut().zip(t) {
            *yi += ti;
        }
    }

    fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        self.a.inner.apply_transpose_into(x, y);
        let t = self.b.apply_transpose(x);
        for (yi, ti) in y.iter_mut().zip(t) {
            *yi += ti;
        }
    }

    fn supports_transpose(&self) -> bool {
        self.a.supports_transpose() && self.b.supports_transpose()
    }

    fn descriptor(&self) -> String {
        format!("({} + {})", self.a.descriptor(), self.b.descriptor())
    }
}

struct Scale {
    s: f64,
    a: Op,
}

impl LinearOperator for Scale {
    fn nrows(&self) -> usize {
        self.a.nrows()
    }

    fn ncols(&self) -> usize {
        self.a.ncols()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.a.inner.apply_into(x, y);
        for yi in y.iter_mut() {
            *yi *= self.s;
        }
    }

    fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        self.a.inner.apply_transpose_into(x, y);
        for yi in y.iter_mut() {
            *yi *= self.s;
        }
    }

    fn supports_transpose(&self) -> bool {
        self.a.supports_transpose()
    }

    fn descriptor(&self) -> String {
        format!("({}*{})", self.s, self.a.descriptor())
    }
}

struct Transpose {
    a: Op,
}

impl LinearOperator for Transpose {
    fn nrows(&self) -> usize {
        self.a.ncols()
    }

    fn ncols(&self) -> usize {
        self.a.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.a.inner.apply_transpose_into(x, y);
    }

    fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        self.a.inner.apply_into(x, y);
    }

    fn supports_transpose(&self) -> bool {
        true
    }

    fn descriptor(&self) -> String {
        format!("{}^T", self.a.descriptor())
    }
}
