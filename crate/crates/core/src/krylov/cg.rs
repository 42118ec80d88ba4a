//! Conjugate gradients for symmetric positive definite operators.

use super::{axpy, dot, nrm2, SolveStatus, SolverStats, StopCriteria};
use crate::operator::LinearOperator;

/// CG from the zero start vector. A search direction with `p^T A p <= 0`
/// proves the operator is not positive definite and stops the iteration
/// with [`SolveStatus::Breakdown`], returning the last iterate.
pub fn cg(op: &dyn LinearOperator, b: &[f64], stop: &StopCriteria) -> (Vec<f64>, SolverStats) {
    let n = b.len();
    assert_eq!(op.nrows(), n, "operator rows do not match rhs length");
    assert_eq!(op.ncols(), n, "cg needs a square operator");

    let bnorm = nrm2(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return (x, SolverStats::trivial());
    }

    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let mut history = vec![1.0];
    let mut iters = 0usize;
    let mut status = SolveStatus::MaxIterations;

    while iters < stop.max_iters {
        let mut ap = vec![0.0; n];
        op.apply_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            status = SolveStatus::Breakdown;
            break;
        }
        let alpha = rs / pap;
        axpy(&mut x, alpha, &p);
        axpy(&mut r, -alpha, &ap);
        let rs_next = dot(&r, &r);
        let rel = rs_next.sqrt() / bnorm;
        iters += 1;
        history.push(rel);
        if rel <= stop.rel_tol {
            status = SolveStatus::Converged;
            break;
        }
        let beta = rs_next / rs;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rs = rs_next;
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
