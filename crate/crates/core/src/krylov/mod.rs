//! Krylov solvers: restarted GMRES, flexible GMRES with a right
//! preconditioner, CG, LSQR, and a minimal residual iteration specialized
//! to shifted skew-symmetric systems.
//!
//! Common contract: every solver starts from the zero vector, records one
//! relative-residual entry per iteration plus the initial residual (so the
//! history always has `iterations + 1` entries), and never mutates its
//! inputs. A zero right-hand side returns the zero solution immediately
//! with a single `0.0` history entry.

mod cg;
mod gmres;
mod lsqr;
mod mrs;

pub use cg::cg;
pub use gmres::{fgmres, gmres};
pub use lsqr::lsqr;
pub use mrs::mrs;

use thiserror::Error;

/// Relative-residual tolerance and iteration cap.
#[derive(Clone, Copy, Debug)]
pub struct StopCriteria {
    pub rel_tol: f64,
    pub max_iters: usize,
}

impl StopCriteria {
    pub fn new(rel_tol: f64, max_iters: usize) -> Self {
        StopCriteria { rel_tol, max_iters }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Breakdown,
}

/// Per-solve accounting returned alongside the iterate.
#[derive(Clone, Debug)]
pub struct SolverStats {
    pub iterations: usize,
    /// Relative residual per iteration; entry 0 is the initial residual.
    pub residual_history: Vec<f64>,
    pub status: SolveStatus,
    pub final_relative_residual: f64,
}

impl SolverStats {
    pub(crate) fn trivial() -> Self {
        SolverStats {
            iterations: 0,
            residual_history: vec![0.0],
            status: SolveStatus::Converged,
            final_relative_residual: 0.0,
        }
    }
}

/// Right preconditioner contract for flexible GMRES: approximately solves
/// `M z = t`. The approximation may vary between invocations, which is why
/// application takes `&mut self` (implementations typically accumulate
/// inner-iteration statistics).
pub trait Preconditioner {
    fn apply(&mut self, t: &[f64]) -> Result<Vec<f64>, PrecondFailure>;
}

/// Identity preconditioner; turns flexible GMRES into plain GMRES.
pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn apply(&mut self, t: &[f64]) -> Result<Vec<f64>, PrecondFailure> {
        Ok(t.to_vec())
    }
}

/// Fatal failure inside a preconditioner application. Inner iteration caps
/// are not failures; implementations reserve this for conditions that make
/// the preconditioner unusable (e.g. an indefinite projected operator).
#[derive(Debug, Error)]
#[error("{message}")]
pub struct PrecondFailure {
    pub message: String,
}

impl PrecondFailure {
    pub fn new(message: impl Into<String>) -> Self {
        PrecondFailure {
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum KrylovError {
    /// The preconditioner reported a fatal failure; carries the statistics
    /// accumulated up to that point.
    #[error("preconditioner failed after {} iterations: {message}", stats.iterations)]
    Preconditioner { message: String, stats: SolverStats },
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn nrm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub(crate) fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Plane rotation zeroing `b`: returns `(c, s)` with `c*a + s*b = r >= 0`
/// magnitude `hypot(a, b)`.
pub(crate) fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        if a == 0.0 {
            (1.0, 0.0)
        } else {
            (a.signum(), 0.0)
        }
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}
