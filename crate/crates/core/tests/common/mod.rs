//! Dense oracles and seeded generators shared by the integration tests.
//! Everything dense goes through nalgebra so the iterative results are
//! checked against an independent implementation.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saddle_core::SparseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn to_dense(m: &SparseMatrix) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplet_iter() {
        d[(i, j)] += v;
    }
    d
}

/// Sparse matrix with Bernoulli(density) entries drawn uniform from (0, 1).
pub fn random_sparse(
    rng: &mut ChaCha8Rng,
    nrows: usize,
    ncols: usize,
    density: f64,
) -> SparseMatrix {
    let mut triplets = Vec::new();
    for j in 0..ncols {
        for i in 0..nrows {
            if unit(rng) < density {
                triplets.push((i, j, unit(rng)));
            }
        }
    }
    SparseMatrix::from_triplets(nrows, ncols, &triplets).unwrap()
}

/// Symmetric positive definite by construction: `R + R^T + 2*dim*I` with
/// `R` entries in (0, 1) makes the diagonal strictly dominant.
pub fn random_spd(rng: &mut ChaCha8Rng, dim: usize, density: f64) -> SparseMatrix {
    let r = random_sparse(rng, dim, dim, density);
    let sym = r.add_scaled(1.0, &r.transpose(), 1.0);
    sym.add_scaled(1.0, &SparseMatrix::identity(dim), 2.0 * dim as f64)
}

/// Full column rank n-by-m block: sparse noise plus a scaled identity in
/// the leading rows.
pub fn random_tall_full_rank(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    density: f64,
) -> SparseMatrix {
    assert!(m <= n);
    let mut triplets = Vec::new();
    for j in 0..m {
        for i in 0..n {
            if unit(rng) < density {
                triplets.push((i, j, unit(rng)));
            }
        }
        triplets.push((j, j, 1.0));
    }
    SparseMatrix::from_triplets(n, m, &triplets).unwrap()
}

/// Strictly diagonally dominant nonsymmetric square matrix.
pub fn random_dominant(rng: &mut ChaCha8Rng, dim: usize, density: f64) -> SparseMatrix {
    let r = random_sparse(rng, dim, dim, density);
    r.add_scaled(1.0, &SparseMatrix::identity(dim), 2.0 * dim as f64)
}

/// Skew-symmetric matrix: `R - R^T`.
pub fn random_skew(rng: &mut ChaCha8Rng, dim: usize, density: f64) -> SparseMatrix {
    let r = random_sparse(rng, dim, dim, density);
    r.add_scaled(1.0, &r.transpose(), -1.0)
}

pub fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| unit(rng) - 0.5).collect()
}

/// Direct dense solve by LU with full pivoting.
pub fn dense_solve(a: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let rhs = DVector::from_column_slice(b);
    a.clone()
        .full_piv_lu()
        .solve(&rhs)
        .expect("dense oracle matrix is singular")
        .as_slice()
        .to_vec()
}

/// Minimum-norm least-squares solve through the SVD pseudoinverse.
pub fn min_norm_solve(a: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let rhs = DVector::from_column_slice(b);
    let svd = a.clone().svd(true, true);
    svd.solve(&rhs, 1e-12)
        .expect("svd oracle failed")
        .as_slice()
        .to_vec()
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Asserts `got` approximates `want` to `tol` relative to `want`'s norm
/// (absolute when `want` is zero).
pub fn assert_close(got: &[f64], want: &[f64], tol: f64, label: &str) {
    assert_eq!(got.len(), want.len(), "{label}: length mismatch");
    let scale = norm2(want).max(1.0);
    let diff: Vec<f64> = got.iter().zip(want).map(|(g, w)| g - w).collect();
    let err = norm2(&diff) / scale;
    assert!(
        err <= tol,
        "{label}: relative error {err:.3e} exceeds {tol:.1e}"
    );
}
