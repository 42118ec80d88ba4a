//! LSQR: Golub-Kahan bidiagonalization for least-squares and minimum-norm
//! problems, no damping.
//!
//! Two convergence rules run side by side. For consistent (including
//! underdetermined) systems the relative residual `||b - A x|| / ||b||`
//! reaches the tolerance; for inconsistent systems it cannot, and the
//! normal-equations criterion `||A^T r|| / (||A|| ||r||)` takes over, with
//! `||A||` estimated from the accumulated bidiagonalization scalars. Every
//! iterate lies in the row space of the operator, so the converged solution
//! of a consistent system is the minimum-norm one.

use super::{axpy, nrm2, SolveStatus, SolverStats, StopCriteria};
use crate::operator::LinearOperator;

pub fn lsqr(op: &dyn LinearOperator, b: &[f64], stop: &StopCriteria) -> (Vec<f64>, SolverStats) {
    let rows = op.nrows();
    let cols = op.ncols();
    assert_eq!(b.len(), rows, "rhs length does not match operator rows");
    assert!(
        op.supports_transpose(),
        "lsqr needs transpose application: {}",
        op.descriptor()
    );

    let bnorm = nrm2(b);
    let mut x = vec![0.0; cols];
    if bnorm == 0.0 {
        return (x, SolverStats::trivial());
    }

    let mut u: Vec<f64> = b.iter().map(|bi| bi / bnorm).collect();
    let mut v = vec![0.0; cols];
    op.apply_transpose_into(&u, &mut v);
    let mut alpha = nrm2(&v);
    if alpha == 0.0 {
        // A^T b = 0: x = 0 already minimizes ||b - A x||.
        return (
            x,
            SolverStats {
                iterations: 0,
                residual_history: vec![1.0],
                status: SolveStatus::Converged,
                final_relative_residual: 1.0,
            },
        );
    }
    for vi in &mut v {
        *vi /= alpha;
    }

    let mut w = v.clone();
    let mut phibar = bnorm;
    let mut rhobar = alpha;
    let mut anorm2 = 0.0f64;
    let mut history = vec![1.0];
    let mut iters = 0usize;
    let mut status = SolveStatus::MaxIterations;
    let mut final_rel = 1.0;

    let mut buf_rows = vec![0.0; rows];
    let mut buf_cols = vec![0.0; cols];

    while iters < stop.max_iters {
        // Bidiagonalization step: beta u = A v - alpha u; alpha v = A^T u - beta v.
        op.apply_into(&v, &mut buf_rows);
        for (ui, ti) in u.iter_mut().zip(&buf_rows) {
            *ui = ti - alpha * *ui;
        }
        let beta = nrm2(&u);
        let mut alpha_next = 0.0;
        if beta > 0.0 {
            for ui in &mut u {
                *ui /= beta;
            }
            op.apply_transpose_into(&u, &mut buf_cols);
            for (vi, ti) in v.iter_mut().zip(&buf_cols) {
                *vi = ti - beta * *vi;
            }
            alpha_next = nrm2(&v);
            if alpha_next > 0.0 {
                for vi in &mut v {
                    *vi /= alpha_next;
                }
            }
        }
        anorm2 += alpha * alpha + beta * beta;

        // Plane rotation eliminating beta from the lower bidiagonal.
        let rho = rhobar.hypot(beta);
        let c = rhobar / rho;
        let s = beta / rho;
        let theta = s * alpha_next;
        rhobar = -c * alpha_next;
        let phi = c * phibar;
        phibar *= s;

        axpy(&mut x, phi / rho, &w);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi = vi - (theta / rho) * *wi;
        }

        alpha = alpha_next;
        let rnorm = phibar;
        let arnorm = alpha_next * c.abs() * phibar;
        let rel = rnorm / bnorm;
        iters += 1;
        history.push(rel);
        final_rel = rel;

        if rel <= stop.rel_tol {
            status = SolveStatus::Converged;
            break;
        }
        let anorm = anorm2.sqrt();
        if arnorm <= stop.rel_tol * anorm * rnorm {
            status = SolveStatus::Converged;
            break;
        }
        if beta == 0.0 && alpha_next == 0.0 {
            // The bidiagonalization terminated exactly but neither rule
            // fired numerically.
            status = SolveStatus::Breakdown;
            break;
        }
    }

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
