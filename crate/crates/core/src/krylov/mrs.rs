//! Minimal residual iteration for shifted skew-symmetric systems
//! `(I + J) x = b` with `J^T = -J`.
//!
//! A Lanczos recurrence on the skew operator needs only three terms: the
//! diagonal of the projected matrix vanishes identically and the remaining
//! couplings are `-beta_k` above and `beta_{k+1}` below the diagonal. The
//! least-squares problem over the shifted tridiagonal projection is updated
//! by plane rotations, giving MINRES-style short-recurrence iterates whose
//! by-product residual norms shrink by a factor `|s_k| <= 1` every step,
//! hence a non-increasing history by construction.

use super::{axpy, givens, nrm2, SolveStatus, SolverStats, StopCriteria};
use crate::operator::LinearOperator;

/// Solves `(I + J) x = b` for skew-symmetric `J` from the zero vector.
/// The operator passed is `J` itself; the unit shift is implicit.
///
/// Skew symmetry is the caller's contract; debug builds spot-check it with
/// seeded probe vectors (`|x^T J x| <= 1e-10 ||x|| ||J x||`).
pub fn mrs(j_op: &dyn LinearOperator, b: &[f64], stop: &StopCriteria) -> (Vec<f64>, SolverStats) {
    let n = b.len();
    assert_eq!(j_op.nrows(), n, "operator rows do not match rhs length");
    assert_eq!(j_op.ncols(), n, "mrs needs a square operator");
    debug_assert!(
        skew_probe_ok(j_op),
        "mrs operator failed the skew-symmetry probe"
    );

    let bnorm = nrm2(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return (x, SolverStats::trivial());
    }

    let mut v: Vec<f64> = b.iter().map(|bi| bi / bnorm).collect();
    let mut v_prev: Vec<f64> = vec![0.0; n];
    let mut beta = 0.0f64; // beta_k, zero at k = 1
    let mut gbar = bnorm;
    // Rotations of steps k-1 and k-2.
    let (mut c1, mut s1) = (1.0f64, 0.0f64);
    let (mut c2, mut s2) = (1.0f64, 0.0f64);
    let mut p_prev: Vec<f64> = vec![0.0; n];
    let mut p_prev2: Vec<f64> = vec![0.0; n];

    let mut history = vec![1.0];
    let mut iters = 0usize;
    let mut status = SolveStatus::MaxIterations;
    let mut k = 0usize;

    while iters < stop.max_iters {
        k += 1;
        // w = J v_k + beta_k v_{k-1}; the +beta term folds the skew
        // coupling with the previous basis vector into the recurrence.
        let mut w = vec![0.0; n];
        j_op.apply_into(&v, &mut w);
        if k > 1 {
            axpy(&mut w, beta, &v_prev);
        }
        let beta_next = nrm2(&w);

        // Column k of the shifted projection has entries
        // (-beta_k, 1, beta_{k+1}) in rows (k-1, k, k+1); fold in the two
        // previous rotations, then generate the one for this column.
        let mut eps = 0.0;
        let mut delta = 0.0;
        let mut gamma_bar = 1.0;
        if k >= 2 {
            let mut a = -beta;
            if k >= 3 {
                eps = s2 * a;
                a *= c2;
            }
            delta = c1 * a + s1;
            gamma_bar = -s1 * a + c1;
        }
        let (c, s) = givens(gamma_bar, beta_next);
        let gamma = c * gamma_bar + s * beta_next;
        if gamma == 0.0 {
            status = SolveStatus::Breakdown;
            break;
        }

        let phi = c * gbar;
        gbar *= -s;

        // Short-recurrence direction update and iterate step.
        let mut p = v.clone();
        axpy(&mut p, -delta, &p_prev);
        axpy(&mut p, -eps, &p_prev2);
        let inv = 1.0 / gamma;
        for pi in &mut p {
            *pi *= inv;
        }
        axpy(&mut x, phi, &p);

        let rel = gbar.abs() / bnorm;
        iters += 1;
        history.push(rel);
        if rel <= stop.rel_tol {
            status = SolveStatus::Converged;
            break;
        }

        // Advance the recurrence state.
        let inv_b = 1.0 / beta_next;
        v_prev.copy_from_slice(&v);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi * inv_b;
        }
        beta = beta_next;
        (c2, s2) = (c1, s1);
        (c1, s1) = (c, s);
        p_prev2 = p_prev;
        p_prev = p;
    }

    let final_rel = *history.last().unwrap();
    (
        x,
        SolverStats {
            iterations: iters,
            residual_history: history,
            status,
            final_relative_residual: final_rel,
        },
    )
}

#[cfg(debug_assertions)]
fn skew_probe_ok(j_op: &dyn LinearOperator) -> bool {
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    let n = j_op.ncols();
    if n == 0 {
        return true;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    for _ in 0..2 {
        let x: Vec<f64> = (0..n)
            .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0)
            .collect();
        let mut jx = vec![0.0; n];
        j_op.apply_into(&x, &mut jx);
        let quad = x.iter().zip(&jx).map(|(a, b)| a * b).sum::<f64>().abs();
        if quad > 1e-10 * nrm2(&x) * nrm2(&jx) {
            return false;
        }
    }
    true
}

#[cfg(not(debug_assertions))]
fn skew_probe_ok(_j_op: &dyn LinearOperator) -> bool {
    true
}
