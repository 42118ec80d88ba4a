//! Restarted GMRES and flexible GMRES sharing one engine.
//!
//! Arnoldi uses modified Gram-Schmidt with a single reorthogonalization
//! pass, triggered when the orthogonalized vector lost more than eight
//! digits of its pre-orthogonalization norm. Right preconditioning keeps
//! the least-squares by-product equal to the residual of the original
//! system, so the recorded history needs no correction.

use super::{
    axpy, dot, givens, nrm2, KrylovError, Preconditioner, SolveStatus, SolverStats, StopCriteria,
};
use crate::operator::LinearOperator;

/// Cancellation ratio below which the MGS pass is repeated once.
const REORTH_TRIGGER: f64 = 1e-8;
/// Cancellation ratio treated as a zero Arnoldi vector (happy breakdown).
const HAPPY_RATIO: f64 = 1e-14;

/// Restarted GMRES with restart length `restart`, zero start vector.
pub fn gmres(
    op: &dyn LinearOperator,
    b: &[f64],
    restart: usize,
    stop: &StopCriteria,
) -> (Vec<f64>, SolverStats) {
    match engine(op, b, restart, stop, None) {
        Ok(out) => out,
        Err(_) => unreachable!("gmres runs without a preconditioner"),
    }
}

/// Flexible GMRES with a right preconditioner that may change between
/// iterations. Fails only if the preconditioner itself fails fatally.
pub fn fgmres(
    op: &dyn LinearOperator,
    b: &[f64],
    precond: &mut dyn Preconditioner,
    restart: usize,
    stop: &StopCriteria,
) -> Result<(Vec<f64>, SolverStats), KrylovError> {
    engine(op, b, restart, stop, Some(precond))
}

fn engine(
    op: &dyn LinearOperator,
    b: &[f64],
    restart: usize,
    stop: &StopCriteria,
    mut precond: Option<&mut dyn Preconditioner>,
) -> Result<(Vec<f64>, SolverStats), KrylovError> {
    let n = b.len();
    assert_eq!(op.nrows(), n, "operator rows do not match rhs length");
    assert_eq!(op.ncols(), n, "gmres needs a square operator");
    assert!(restart >= 1, "restart length must be at least 1");

    let bnorm = nrm2(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, SolverStats::trivial()));
    }

    let mut history = vec![1.0];
    let mut iters = 0usize;
    let status;
    let final_rel;

    'outer: loop {
        // Residual at the current iterate: explicit recomputation at every
        // restart boundary (and at entry, where x = 0 gives r = b).
        let ax = apply(op, &x);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = nrm2(&r);
        let rel0 = beta / bnorm;
        if rel0 <= stop.rel_tol {
            status = SolveStatus::Converged;
            final_rel = rel0;
            break 'outer;
        }
        if iters >= stop.max_iters {
            status = SolveStatus::MaxIterations;
            final_rel = rel0;
            break 'outer;
        }

        for ri in &mut r {
            *ri /= beta;
        }
        let mut v_basis: Vec<Vec<f64>> = vec![r];
        let mut z_basis: Vec<Vec<f64>> = Vec::new();
        let mut h_cols: Vec<Vec<f64>> = Vec::new();
        let mut cs: Vec<f64> = Vec::new();
        let mut sn: Vec<f64> = Vec::new();
        let mut phis: Vec<f64> = Vec::new();
        let mut gbar = beta;
        let mut cycle_converged = false;
        let mut happy = false;
        let mut singular = false;

        while phis.len() < restart && iters < stop.max_iters {
            let j = phis.len();
            let vj = v_basis[j].clone();
            let zj = match precond.as_deref_mut() {
                Some(p) => match p.apply(&vj) {
                    Ok(z) => z,
                    Err(failure) => {
                        return Err(KrylovError::Preconditioner {
                            message: failure.message,
                            stats: SolverStats {
                                iterations: iters,
                                final_relative_residual: *history.last().unwrap(),
                                residual_history: history,
                                status: SolveStatus::Breakdown,
                            },
                        });
                    }
                },
                None => vj.clone(),
            };
            let mut w = apply(op, &zj);
            if precond.is_some() {
                z_basis.push(zj);
            }

            let w_pre = nrm2(&w);
            let mut hcol = vec![0.0; j + 2];
            for (i, vi) in v_basis.iter().enumerate() {
                let hij = dot(vi, &w);
                axpy(&mut w, -hij, vi);
                hcol[i] = hij;
            }
            let mut wn = nrm2(&w);
            if wn < REORTH_TRIGGER * w_pre {
                for (i, vi) in v_basis.iter().enumerate() {
                    let extra = dot(vi, &w);
                    axpy(&mut w, -extra, vi);
                    hcol[i] += extra;
                }
                wn = nrm2(&w);
            }
            hcol[j + 1] = wn;
            happy = wn <= HAPPY_RATIO * w_pre;

            for i in 0..j {
                let (hi, hi1) = (hcol[i], hcol[i + 1]);
                hcol[i] = cs[i] * hi + sn[i] * hi1;
                hcol[i + 1] = -sn[i] * hi + cs[i] * hi1;
            }
            let (c, s) = givens(hcol[j], hcol[j + 1]);
            let rjj = c * hcol[j] + s * hcol[j + 1];
            if rjj == 0.0 {
                // Singular projected system; the basis cannot grow and the
                // current least-squares solution already uses j columns.
                singular = true;
                break;
            }
            hcol[j] = rjj;
            hcol.truncate(j + 1);
            h_cols.push(hcol);
            cs.push(c);
            sn.push(s);
            phis.push(c * gbar);
            gbar *= -s;

            let rel = gbar.abs() / bnorm;
            iters += 1;
            history.push(rel);

            if rel <= stop.rel_tol {
                cycle_converged = true;
                break;
            }
            if happy {
                break;
            }
            let inv = 1.0 / wn;
            v_basis.push(w.iter().map(|t| t * inv).collect());
        }

        // Back substitution over the rotated upper-triangular column set,
        // then the iterate update from the flexible basis when present.
        let cols = phis.len();
        let mut y = phis.clone();
        for i in (0..cols).rev() {
            for k in i + 1..cols {
                y[i] -= h_cols[k][i] * y[k];
            }
            y[i] /= h_cols[i][i];
        }
        let dirs: &[Vec<f64>] = if precond.is_some() {
            &z_basis
        } else {
            &v_basis
        };
        for (k, yk) in y.iter().enumerate() {
            axpy(&mut x, *yk, &dirs[k]);
        }

        if cycle_converged {
            status = SolveStatus::Converged;
            final_rel = *history.last().unwrap();
            break 'outer;
        }
        if happy || singular {
            // The Krylov space became invariant (or the projection went
            // singular) before the tolerance was met; decide on the true
            // residual of what was assembled.
            let ax = apply(op, &x);
            let rel = b
                .iter()
                .zip(&ax)
                .map(|(bi, ai)| (bi - ai) * (bi - ai))
                .sum::<f64>()
                .sqrt()
                / bnorm;
            final_rel = rel;
            status = if rel <= stop.rel_tol {
                SolveStatus::Converged
            } else {
                SolveStatus::Breakdown
            };
            break 'outer;
        }
    }

    Ok((
        x,
        SolverStats {
            iterations: iters,
            residual_history: history,
            status,
            final_relative_residual: final_rel,
        },
    ))
}

fn apply(op: &dyn LinearOperator, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; op.nrows()];
    op.apply_into(x, &mut y);
    y
}
