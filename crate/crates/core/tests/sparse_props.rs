//! Property tests for the sparse kernels against dense arithmetic.

mod common;

use common::to_dense;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use saddle_core::{SparseMatrix, SparseVector};

type Triplets = Vec<(usize, usize, f64)>;

fn dims_and_triplets(
    max_dim: usize,
    max_nnz: usize,
) -> impl Strategy<Value = (usize, usize, Triplets)> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        let entry = (0..r, 0..c, -100.0..100.0f64);
        (
            Just(r),
            Just(c),
            proptest::collection::vec(entry, 0..=max_nnz),
        )
    })
}

fn dense_of(r: usize, c: usize, triplets: &Triplets) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(r, c);
    for &(i, j, v) in triplets {
        d[(i, j)] += v;
    }
    d
}

fn sparse_entries(dim: usize, max_nnz: usize) -> impl Strategy<Value = Vec<(usize, f64)>> {
    proptest::collection::vec((0..dim, -100.0..100.0f64), 0..=max_nnz).prop_map(|mut e| {
        e.sort_by_key(|&(i, _)| i);
        e.dedup_by_key(|&mut (i, _)| i);
        e
    })
}

proptest! {
    #[test]
    fn matvec_matches_dense(
        (r, c, t) in dims_and_triplets(12, 60),
        seed_x in proptest::collection::vec(-10.0..10.0f64, 12),
    ) {
        let m = SparseMatrix::from_triplets(r, c, &t).unwrap();
        let x = &seed_x[..c];
        let want = dense_of(r, c, &t) * DVector::from_column_slice(x);
        let got = m.matvec(x);
        for (g, w) in got.iter().zip(want.iter()) {
            prop_assert!((g - w).abs() <= 1e-9 * (1.0 + w.abs()));
        }
    }

    #[test]
    fn transpose_is_the_adjoint(
        (r, c, t) in dims_and_triplets(12, 60),
        seed in proptest::collection::vec(-10.0..10.0f64, 24),
    ) {
        let m = SparseMatrix::from_triplets(r, c, &t).unwrap();
        let x = &seed[..c];
        let y = &seed[12..12 + r];
        let ax_dot_y: f64 = m.matvec(x).iter().zip(y).map(|(a, b)| a * b).sum();
        let x_dot_aty: f64 = m.matvec_transpose(y).iter().zip(x).map(|(a, b)| a * b).sum();
        prop_assert!((ax_dot_y - x_dot_aty).abs() <= 1e-8 * (1.0 + ax_dot_y.abs()));

        let mt = m.transpose();
        prop_assert_eq!(mt.nrows(), c);
        prop_assert_eq!(mt.ncols(), r);
        prop_assert_eq!(to_dense(&mt), dense_of(r, c, &t).transpose());
    }

    #[test]
    fn add_scaled_matches_dense(
        (r, c, ta) in dims_and_triplets(10, 40),
        tb_seed in proptest::collection::vec((0usize..10, 0usize..10, -100.0..100.0f64), 0..40),
        alpha in -4.0..4.0f64,
        beta in -4.0..4.0f64,
    ) {
        let tb: Triplets = tb_seed
            .into_iter()
            .map(|(i, j, v)| (i % r, j % c, v))
            .collect();
        let a = SparseMatrix::from_triplets(r, c, &ta).unwrap();
        let b = SparseMatrix::from_triplets(r, c, &tb).unwrap();
        let got = to_dense(&a.add_scaled(alpha, &b, beta));
        let want = dense_of(r, c, &ta) * alpha + dense_of(r, c, &tb) * beta;
        prop_assert!((got - want).norm() <= 1e-9);
    }

    #[test]
    fn axpy_without_drop_is_exact(
        xs in sparse_entries(20, 12),
        ys in sparse_entries(20, 12),
        alpha in -4.0..4.0f64,
    ) {
        let x = SparseVector::from_entries(20, &xs).unwrap();
        let y = SparseVector::from_entries(20, &ys).unwrap();
        let got = x.axpy_drop(alpha, &y, 0.0).to_dense();
        let xd = x.to_dense();
        let yd = y.to_dense();
        for i in 0..20 {
            let want = xd[i] + alpha * yd[i];
            prop_assert!((got[i] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn axpy_drop_keeps_only_entries_at_or_above_the_post_update_threshold(
        xs in sparse_entries(20, 12),
        ys in sparse_entries(20, 12),
        alpha in -4.0..4.0f64,
        tau in 0.0..0.5f64,
    ) {
        let x = SparseVector::from_entries(20, &xs).unwrap();
        let y = SparseVector::from_entries(20, &ys).unwrap();
        let exact = x.axpy_drop(alpha, &y, 0.0);
        let dropped = x.axpy_drop(alpha, &y, tau);
        let threshold = tau * exact.norm2();

        let exact_dense = exact.to_dense();
        let dropped_dense = dropped.to_dense();
        for i in 0..20 {
            if dropped_dense[i] != 0.0 {
                prop_assert_eq!(dropped_dense[i], exact_dense[i]);
                prop_assert!(dropped_dense[i].abs() >= threshold * (1.0 - 1e-12));
            } else {
                prop_assert!(exact_dense[i].abs() <= threshold * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn symmetric_split_reconstructs_with_correct_symmetry(
        (d, _, t) in dims_and_triplets(10, 50),
    ) {
        let square: Triplets = t.into_iter().map(|(i, j, v)| (i % d, j % d, v)).collect();
        let m = SparseMatrix::from_triplets(d, d, &square).unwrap();
        let (sym, skew) = m.symmetric_split();
        let md = to_dense(&m);
        let symd = to_dense(&sym);
        let skewd = to_dense(&skew);
        prop_assert!((symd.clone() + skewd.clone() - md).norm() <= 1e-10);
        prop_assert!((symd.transpose() - symd).norm() <= 1e-12);
        prop_assert!((skewd.transpose() + skewd).norm() <= 1e-12);
    }
}
