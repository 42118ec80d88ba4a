//! Multi-layer iterative schemes for saddle-point systems.
//!
//! The driver [`solve`] runs flexible restarted GMRES on the block system
//!
//! ```text
//! [ A    B ] [x]   [f]
//! [-C^T  0 ] [y] = [g]
//! ```
//!
//! right-preconditioned by a nullspace method whose stages are themselves
//! iterative: a least-squares particular solution of the constraint block,
//! a reduced solve on the projected operator (conjugate gradients or inner
//! flexible GMRES with a shifted-skew minimal-residual preconditioner), a
//! basis recovery, and a least-squares multiplier solve. The reduced space
//! comes from a pivoted-conjugation nullspace basis, rescaled by a factored
//! approximate inverse of the projected operator's symmetric part.

use crate::fsai::{apply_split_preconditioned, fsai, FsaiParams};
use crate::krylov::{
    cg, fgmres, lsqr, mrs, nrm2, KrylovError, PrecondFailure, Preconditioner, SolveStatus,
    StopCriteria,
};
use crate::nullspace::{mgs_m_orthonormalize, saroc, SarocParams};
use crate::operator::{LinearOperator, Op};
use crate::sparse::SparseMatrix;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

/// The three block-structure classes the schemes distinguish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SaddleCase {
    /// `B = C` and `A = A^T`.
    Symmetric,
    /// `B = C` but `A != A^T`.
    Generalized,
    /// `B != C`.
    General,
}

impl fmt::Display for SaddleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SaddleCase::Symmetric => "symmetric",
            SaddleCase::Generalized => "generalized",
            SaddleCase::General => "general",
        })
    }
}

impl FromStr for SaddleCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "symmetric" => Ok(SaddleCase::Symmetric),
            "generalized" => Ok(SaddleCase::Generalized),
            "general" => Ok(SaddleCase::General),
            other => Err(format!(
                "unknown case {other:?}; expected symmetric, generalized, or general"
            )),
        }
    }
}

/// Classifies the blocks: Symmetric iff `B == C` and `A == A^T` (exact
/// value equality, explicit zeros ignored), Generalized iff `B == C` only,
/// General otherwise.
pub fn detect_case(a: &SparseMatrix, b: &SparseMatrix, c: &SparseMatrix) -> SaddleCase {
    let same_shape = b.nrows() == c.nrows() && b.ncols() == c.ncols();
    let b_eq_c = same_shape && b.add_scaled(1.0, c, -1.0).nnz() == 0;
    if !b_eq_c {
        return SaddleCase::General;
    }
    let a_sym = a.add_scaled(1.0, &a.transpose(), -1.0).nnz() == 0;
    if a_sym {
        SaddleCase::Symmetric
    } else {
        SaddleCase::Generalized
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error("{0}")]
    Shape(String),
    #[error("requested case {requested} does not fit the blocks: {reason}")]
    CaseMismatch {
        requested: SaddleCase,
        reason: String,
    },
}

/// A saddle-point problem with validated block shapes and a case label.
#[derive(Clone, Debug)]
pub struct SaddleProblem {
    pub a: SparseMatrix,
    pub b: SparseMatrix,
    pub c: SparseMatrix,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub case: SaddleCase,
}

impl SaddleProblem {
    /// Validates shapes and detects the case from the block values.
    pub fn new(
        a: SparseMatrix,
        b: SparseMatrix,
        c: SparseMatrix,
        f: Vec<f64>,
        g: Vec<f64>,
    ) -> Result<Self, SchemeError> {
        let case = detect_case(&a, &b, &c);
        SaddleProblem::with_case(a, b, c, f, g, case)
    }

    /// Validates shapes against an explicit case label. Forcing General on
    /// matching blocks is legal (the two-basis path still applies); forcing
    /// Symmetric or Generalized on blocks that violate their definitions is
    /// an error.
    pub fn with_case(
        a: SparseMatrix,
        b: SparseMatrix,
        c: SparseMatrix,
        f: Vec<f64>,
        g: Vec<f64>,
        case: SaddleCase,
    ) -> Result<Self, SchemeError> {
        let n = a.nrows();
        let m = b.ncols();
        if a.ncols() != n {
            return Err(SchemeError::Shape(format!(
                "A must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.nrows() != n || c.nrows() != n || c.ncols() != m {
            return Err(SchemeError::Shape(format!(
                "constraint blocks must both be {n}x{m}, got B {}x{} and C {}x{}",
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols()
            )));
        }
        if m > n {
            return Err(SchemeError::Shape(format!(
                "constraint blocks must be tall: n = {n} < m = {m}"
            )));
        }
        if f.len() != n || g.len() != m {
            return Err(SchemeError::Shape(format!(
                "right-hand sides must have lengths {n} and {m}, got {} and {}",
                f.len(),
                g.len()
            )));
        }
        let detected = detect_case(&a, &b, &c);
        let compatible = match case {
            SaddleCase::Symmetric => detected == SaddleCase::Symmetric,
            SaddleCase::Generalized => detected != SaddleCase::General,
            SaddleCase::General => true,
        };
        if !compatible {
            return Err(SchemeError::CaseMismatch {
                requested: case,
                reason: format!("blocks classify as {detected}"),
            });
        }
        Ok(SaddleProblem {
            a,
            b,
            c,
            f,
            g,
            case,
        })
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.b.ncols()
    }

    /// The stacked right-hand side `[f; g]`.
    pub fn rhs(&self) -> Vec<f64> {
        let mut rhs = Vec::with_capacity(self.n() + self.m());
        rhs.extend_from_slice(&self.f);
        rhs.extend_from_slice(&self.g);
        rhs
    }

    /// The block operator `[[A, B], [-C^T, 0]]`, applied without forming
    /// the square matrix.
    pub fn operator(&self) -> SaddleOperator<'_> {
        SaddleOperator { problem: self }
    }
}

/// Blockwise application of the saddle operator.
pub struct SaddleOperator<'a> {
    problem: &'a SaddleProblem,
}

impl LinearOperator for SaddleOperator<'_> {
    fn nrows(&self) -> usize {
        self.problem.n() + self.problem.m()
    }

    fn ncols(&self) -> usize {
        self.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.problem.n();
        let (x1, x2) = x.split_at(n);
        let mut top = self.problem.a.matvec(x1);
        let bx2 = self.problem.b.matvec(x2);
        for (t, v) in top.iter_mut().zip(bx2) {
            *t += v;
        }
        y[..n].copy_from_slice(&top);
        for (yi, v) in y[n..].iter_mut().zip(self.problem.c.matvec_transpose(x1)) {
            *yi = -v;
        }
    }

    fn descriptor(&self) -> String {
        let p = self.problem;
        format!("saddle[{}+{}]", p.n(), p.m())
    }
}

/// Named tolerance bundles for the preconditioner construction and the
/// inner stopping tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Large,
    Mix,
    Small,
    /// Exact elimination: zero thresholds and drops, near-machine inner
    /// tolerances. Not a benchmark profile; used for validation.
    Exact,
}

impl fmt::Display for ProfileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileName::Large => "large",
            ProfileName::Mix => "mix",
            ProfileName::Small => "small",
            ProfileName::Exact => "exact",
        })
    }
}

impl FromStr for ProfileName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "large" => Ok(ProfileName::Large),
            "mix" => Ok(ProfileName::Mix),
            "small" => Ok(ProfileName::Small),
            "exact" => Ok(ProfileName::Exact),
            other => Err(format!(
                "unknown profile {other:?}; expected large, mix, small, or exact"
            )),
        }
    }
}

/// Drop tolerances, thresholds, orthonormalization window, and inner
/// stopping tolerances, as one named bundle.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ToleranceProfile {
    pub name: ProfileName,
    pub tau_saroc: f64,
    pub rho_saroc: f64,
    pub tau_fsai: f64,
    pub rho_fsai: f64,
    pub tau_mgs: f64,
    pub w_mgs: usize,
    pub eps_in: f64,
    pub eps_innermost: f64,
}

impl ToleranceProfile {
    pub fn large() -> Self {
        ToleranceProfile {
            name: ProfileName::Large,
            tau_saroc: 1e-3,
            rho_saroc: 1e-3,
            tau_fsai: 1e-3,
            rho_fsai: 1e-3,
            tau_mgs: 1e-3,
            w_mgs: 5,
            eps_in: 1e-3,
            eps_innermost: 1e-3,
        }
    }

    pub fn mix() -> Self {
        ToleranceProfile {
            name: ProfileName::Mix,
            tau_saroc: 1e-2,
            rho_saroc: 1e-2,
            tau_fsai: 1e-3,
            rho_fsai: 1e-3,
            tau_mgs: 1e-2,
            w_mgs: 5,
            eps_in: 1e-4,
            eps_innermost: 1e-5,
        }
    }

    pub fn small() -> Self {
        ToleranceProfile {
            name: ProfileName::Small,
            tau_saroc: 1e-5,
            rho_saroc: 1e-5,
            tau_fsai: 1e-5,
            rho_fsai: 1e-5,
            tau_mgs: 1e-5,
            w_mgs: 15,
            eps_in: 1e-5,
            eps_innermost: 1e-5,
        }
    }

    /// Zero thresholds and drops; the preconditioner becomes an (almost)
    /// exact application of the block inverse.
    pub fn exact() -> Self {
        ToleranceProfile {
            name: ProfileName::Exact,
            tau_saroc: 0.0,
            rho_saroc: 0.0,
            tau_fsai: 0.0,
            rho_fsai: 0.0,
            tau_mgs: 0.0,
            w_mgs: usize::MAX,
            eps_in: 1e-12,
            eps_innermost: 1e-12,
        }
    }

    pub fn named(name: ProfileName) -> Self {
        match name {
            ProfileName::Large => Self::large(),
            ProfileName::Mix => Self::mix(),
            ProfileName::Small => Self::small(),
            ProfileName::Exact => Self::exact(),
        }
    }

    fn saroc_params(&self) -> SarocParams {
        SarocParams::new(self.rho_saroc, self.tau_saroc)
    }

    fn fsai_params(&self) -> FsaiParams {
        FsaiParams::new(self.rho_fsai, self.tau_fsai)
    }
}

/// Everything [`solve`] needs besides the problem itself.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub profile: ToleranceProfile,
    /// Request basis orthonormalization in the metric of the (symmetric
    /// part of the) leading block. Ignored when `B != C`.
    pub m_orth: bool,
    /// Outer relative tolerance and iteration cap.
    pub outer: StopCriteria,
    /// Outer (and reduced-solve) restart length.
    pub restart: usize,
    /// Iteration cap of every inner least-squares / reduced solve.
    pub inner_max: usize,
    /// Iteration cap of the innermost shifted-skew solves.
    pub innermost_max: usize,
    /// Diagonal shift added to the projected symmetric part before the
    /// inverse factorization. Zero by default; a caller whose solve failed
    /// with an indefinite projected operator can retry with a positive
    /// value. Never tuned automatically.
    pub ns_shift: f64,
}

impl SolveOptions {
    pub fn with_profile(profile: ToleranceProfile) -> Self {
        SolveOptions {
            profile,
            m_orth: false,
            outer: StopCriteria::new(1e-5, 1000),
            restart: 10,
            inner_max: 1000,
            innermost_max: 1000,
            ns_shift: 0.0,
        }
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions::with_profile(ToleranceProfile::small())
    }
}

/// Failure while building the preconditioner; carries the nonzero counts
/// of whatever had been built already.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct AssemblyFailure {
    pub message: String,
    pub nnz_z: usize,
    pub nnz_u: usize,
    pub nnz_zbar: usize,
}

/// The assembled nullspace preconditioner: bases, the approximate-inverse
/// factor, and the lazily composed reduced operators.
pub struct NullspacePreconditioner {
    pub case: SaddleCase,
    /// Detected rank of the constraint block (columns accepted as pivots).
    pub effective_rank: usize,
    /// Constraint columns declared dependent during the basis build.
    pub skipped_constraints: Vec<usize>,
    /// Per-column pivots of the approximate-inverse factor.
    pub fsai_pivots: Vec<f64>,
    pub nnz_z: usize,
    pub nnz_u: usize,
    pub nnz_w: usize,
    pub nnz_zbar: usize,
    pub m_orth_applied: bool,
    /// Explicit symmetric part of `A`; built only when `B = C` and
    /// `A != A^T`.
    pub a_sym: Option<Arc<SparseMatrix>>,
    /// Explicit skew part of `A`; built alongside `a_sym`.
    pub a_skew: Option<Arc<SparseMatrix>>,
    pub inner_stop: StopCriteria,
    pub innermost_stop: StopCriteria,
    pub restart: usize,
    a_op: Op,
    b_op: Op,
    /// `-(D^T)` with `D = B` when the constraint blocks match, else `C`.
    neg_dt: Op,
    /// The basis actually used for projection (orthonormalized if asked).
    basis: Arc<SparseMatrix>,
    /// The basis combined with the reduced iterate during recovery; equals
    /// `basis` unless the blocks differ.
    recovery: Arc<SparseMatrix>,
    w_mat: Arc<SparseMatrix>,
    /// The reduced operator `W^T (Z^T A U) W`.
    core: Op,
    /// The reduced skew operator `W^T N^J W`; absent in the symmetric case.
    skew: Option<Op>,
}

/// Per-application iteration counts of the preconditioner stages.
#[derive(Clone, Copy, Debug, Default)]
pub struct StageCounts {
    pub lsqr_particular: usize,
    pub cg: usize,
    pub inner_fgmres: usize,
    pub mrs_iterations: usize,
    pub mrs_calls: usize,
    pub lsqr_recover: usize,
}

/// Builds the preconditioner for one problem. Failures carry partial
/// nonzero accounting so reports can still describe what was built.
pub fn assemble(
    problem: &SaddleProblem,
    options: &SolveOptions,
) -> Result<NullspacePreconditioner, AssemblyFailure> {
    let profile = &options.profile;
    let zb = saroc(&problem.b, &profile.saroc_params());
    let nnz_z = zb.basis.nnz();
    let effective_rank = zb.effective_rank;
    let skipped = zb.skipped_columns.clone();

    let a_arc = Arc::new(problem.a.clone());
    let a_op = Op::from_sparse(a_arc, "A");
    let b_arc = Arc::new(problem.b.clone());
    let b_op = Op::from_sparse(b_arc, "B");

    let mut a_sym = None;
    let mut a_skew = None;
    let mut nnz_u = 0usize;
    let mut nnz_zbar = 0usize;
    let mut m_orth_applied = false;

    // Orthonormalize the basis in the metric of (the symmetric part of)
    // the leading block. Not defined for distinct constraint blocks.
    let mut basis_mat = zb.basis;
    if options.m_orth && problem.case != SaddleCase::General {
        let metric: Op = match problem.case {
            SaddleCase::Symmetric => a_op.clone(),
            _ => {
                let (s, j) = problem.a.symmetric_split();
                let s = Arc::new(s);
                a_sym = Some(s.clone());
                a_skew = Some(Arc::new(j));
                Op::from_sparse(s, "As")
            }
        };
        match mgs_m_orthonormalize(&basis_mat, &metric, profile.w_mgs, profile.tau_mgs) {
            Ok(zbar) => {
                nnz_zbar = zbar.nnz();
                basis_mat = zbar;
                m_orth_applied = true;
            }
            Err(e) => {
                return Err(AssemblyFailure {
                    message: format!("basis orthonormalization failed: {e}"),
                    nnz_z,
                    nnz_u: 0,
                    nnz_zbar: 0,
                })
            }
        }
    }

    let basis = Arc::new(basis_mat);
    let z_op = Op::from_sparse(basis.clone(), "Z");

    // The reduced operator Z^T A U before rescaling, the recovery basis,
    // and the symmetric-part operator handed to the inverse factorization.
    let (recovery, zau, ns): (Arc<SparseMatrix>, Op, Op) = match problem.case {
        SaddleCase::Symmetric => {
            let zaz = z_op.transpose().product(&a_op).product(&z_op);
            (basis.clone(), zaz.clone(), zaz)
        }
        SaddleCase::Generalized => {
            let (s, j) = match (&a_sym, &a_skew) {
                (Some(s), Some(j)) => (s.clone(), j.clone()),
                _ => {
                    let (s, j) = problem.a.symmetric_split();
                    (Arc::new(s), Arc::new(j))
                }
            };
            a_sym = Some(s.clone());
            a_skew = Some(j.clone());
            let s_op = Op::from_sparse(s, "As");
            let zaz = z_op.transpose().product(&a_op).product(&z_op);
            let zasz = z_op.transpose().product(&s_op).product(&z_op);
            (basis.clone(), zaz, zasz)
        }
        SaddleCase::General => {
            let ub = saroc(&problem.c, &profile.saroc_params());
            nnz_u = ub.basis.nnz();
            if ub.basis.ncols() != basis.ncols() {
                return Err(AssemblyFailure {
                    message: format!(
                        "nullspace dimensions disagree: {} columns from the B block, {} from the C block",
                        basis.ncols(),
                        ub.basis.ncols()
                    ),
                    nnz_z,
                    nnz_u,
                    nnz_zbar,
                });
            }
            let u = Arc::new(ub.basis);
            let u_op = Op::from_sparse(u.clone(), "U");
            let zau = z_op.transpose().product(&a_op).product(&u_op);
            let ns = zau.symmetrized();
            (u, zau, ns)
        }
    };

    let fsai_input = if options.ns_shift != 0.0 {
        ns.shift(options.ns_shift)
    } else {
        ns
    };
    let w = match fsai(&fsai_input, &profile.fsai_params()) {
        Ok(w) => w,
        Err(e) => {
            return Err(AssemblyFailure {
                message: format!("approximate inverse factorization failed: {e}"),
                nnz_z,
                nnz_u,
                nnz_zbar,
            })
        }
    };
    let nnz_w = w.nnz();
    let w_mat = Arc::new(w.w);
    let core = apply_split_preconditioned(zau.clone(), &w_mat);
    let skew = match problem.case {
        SaddleCase::Symmetric => None,
        SaddleCase::Generalized => {
            let j_op = Op::from_sparse(a_skew.clone().expect("split built above"), "Aj");
            let zjz = z_op.transpose().product(&j_op).product(&z_op);
            Some(apply_split_preconditioned(zjz, &w_mat))
        }
        SaddleCase::General => Some(apply_split_preconditioned(zau.skew_part(), &w_mat)),
    };

    let d_arc = if problem.case == SaddleCase::General {
        Arc::new(problem.c.clone())
    } else {
        Arc::new(problem.b.clone())
    };
    let d_name = if problem.case == SaddleCase::General {
        "C"
    } else {
        "B"
    };
    let neg_dt = Op::from_sparse(d_arc, d_name).transpose().scale(-1.0);

    Ok(NullspacePreconditioner {
        case: problem.case,
        effective_rank,
        skipped_constraints: skipped,
        fsai_pivots: w.pivots,
        nnz_z,
        nnz_u,
        nnz_w,
        nnz_zbar,
        m_orth_applied,
        a_sym,
        a_skew,
        inner_stop: StopCriteria::new(profile.eps_in, options.inner_max),
        innermost_stop: StopCriteria::new(profile.eps_innermost, options.innermost_max),
        restart: options.restart,
        a_op,
        b_op,
        neg_dt,
        basis,
        recovery,
        w_mat,
        core,
        skew,
    })
}

/// Applies the shifted-skew preconditioner of the reduced solve: each call
/// runs the minimal-residual iteration on `(I + J) p = v`.
struct ShiftedSkewPrecond<'a> {
    j: &'a Op,
    stop: StopCriteria,
    iterations: usize,
    calls: usize,
}

impl Preconditioner for ShiftedSkewPrecond<'_> {
    fn apply(&mut self, t: &[f64]) -> Result<Vec<f64>, PrecondFailure> {
        let (x, stats) = mrs(self.j, t, &self.stop);
        self.iterations += stats.iterations;
        self.calls += 1;
        // Hitting the cap or stagnating still yields a usable direction.
        Ok(x)
    }
}

impl NullspacePreconditioner {
    /// One preconditioner application: four stages mapping the outer
    /// residual block pair `(t1, t2)` to a correction `(z1, z2)`.
    ///
    /// A fatal error is returned only when conjugate gradients break down
    /// on the reduced operator (it is not positive definite); iteration
    /// caps in any stage are recorded and tolerated.
    pub fn apply_stages(
        &self,
        t1: &[f64],
        t2: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>, StageCounts), PrecondFailure> {
        let mut counts = StageCounts::default();

        // Stage 1: minimum-norm particular solution of -D^T z = t2.
        let (zhat, s1) = lsqr(&self.neg_dt, t2, &self.inner_stop);
        counts.lsqr_particular = s1.iterations;

        // Stage 2: project the leading-block residual and run the reduced
        // solve for the basis coefficients.
        let mut r1 = self.a_op.apply(&zhat);
        for (r, t) in r1.iter_mut().zip(t1) {
            *r = t - *r;
        }
        let r_proj = self
            .w_mat
            .matvec_transpose(&self.basis.matvec_transpose(&r1));
        let u_hat = match &self.skew {
            None => {
                let (u_hat, stats) = cg(&self.core, &r_proj, &self.inner_stop);
                counts.cg = stats.iterations;
                if stats.status == SolveStatus::Breakdown {
                    return Err(PrecondFailure::new(format!(
                        "conjugate gradient breakdown after {} iterations on the reduced operator; \
                         it is not positive definite on the nullspace",
                        stats.iterations
                    )));
                }
                u_hat
            }
            Some(j) => {
                let mut inner_precond = ShiftedSkewPrecond {
                    j,
                    stop: self.innermost_stop,
                    iterations: 0,
                    calls: 0,
                };
                let (u_hat, stats) = fgmres(
                    &self.core,
                    &r_proj,
                    &mut inner_precond,
                    self.restart,
                    &self.inner_stop,
                )
                .map_err(|e| PrecondFailure::new(format!("reduced solve failed: {e}")))?;
                counts.inner_fgmres = stats.iterations;
                counts.mrs_iterations = inner_precond.iterations;
                counts.mrs_calls = inner_precond.calls;
                u_hat
            }
        };

        // Stage 3: recover the leading-block correction.
        let correction = self.recovery.matvec(&self.w_mat.matvec(&u_hat));
        let z1: Vec<f64> = zhat.iter().zip(&correction).map(|(a, b)| a + b).collect();

        // Stage 4: multiplier from the leading-block equation.
        let mut rhs2 = self.a_op.apply(&z1);
        for (r, t) in rhs2.iter_mut().zip(t1) {
            *r = t - *r;
        }
        let (z2, s4) = lsqr(&self.b_op, &rhs2, &self.inner_stop);
        counts.lsqr_recover = s4.iterations;

        Ok((z1, z2, counts))
    }

    /// Total stored nonzeros, counting the original basis and, when built,
    /// the second basis and the orthonormalized copy.
    pub fn nnz_total(&self) -> usize {
        self.nnz_z + self.nnz_u + self.nnz_w + self.nnz_zbar
    }
}

/// Accumulates stage counts across outer iterations and exposes them as a
/// [`Preconditioner`] for the outer flexible GMRES.
struct TallyingPrecond<'a> {
    prec: &'a NullspacePreconditioner,
    n: usize,
    applies: usize,
    totals: StageCounts,
}

impl Preconditioner for TallyingPrecond<'_> {
    fn apply(&mut self, t: &[f64]) -> Result<Vec<f64>, PrecondFailure> {
        let (t1, t2) = t.split_at(self.n);
        let (z1, z2, counts) = self.prec.apply_stages(t1, t2)?;
        self.applies += 1;
        self.totals.lsqr_particular += counts.lsqr_particular;
        self.totals.cg += counts.cg;
        self.totals.inner_fgmres += counts.inner_fgmres;
        self.totals.mrs_iterations += counts.mrs_iterations;
        self.totals.mrs_calls += counts.mrs_calls;
        self.totals.lsqr_recover += counts.lsqr_recover;
        let mut z = z1;
        z.extend_from_slice(&z2);
        Ok(z)
    }
}

/// Average inner iteration counts. The least-squares, conjugate-gradient,
/// and reduced-solve figures are per preconditioner application; the
/// shifted-skew figure is per innermost invocation.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct InnerAverages {
    pub lsqr_particular: f64,
    pub cg: f64,
    pub inner_fgmres: f64,
    pub mrs: f64,
    pub lsqr_recover: f64,
}

impl TallyingPrecond<'_> {
    fn averages(&self) -> InnerAverages {
        let per_apply = |total: usize| {
            if self.applies == 0 {
                0.0
            } else {
                total as f64 / self.applies as f64
            }
        };
        InnerAverages {
            lsqr_particular: per_apply(self.totals.lsqr_particular),
            cg: per_apply(self.totals.cg),
            inner_fgmres: per_apply(self.totals.inner_fgmres),
            mrs: if self.totals.mrs_calls == 0 {
                0.0
            } else {
                self.totals.mrs_iterations as f64 / self.totals.mrs_calls as f64
            },
            lsqr_recover: per_apply(self.totals.lsqr_recover),
        }
    }
}

/// Outcome label of one solve. `marker` renders the conventional footnote
/// symbol used in result tables (empty for convergence).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReportStatus {
    Converged,
    MaxIterations,
    TrueResidualAboveTol,
    FactorizationFailed,
    ResourceExhausted,
}

impl ReportStatus {
    pub fn marker(&self) -> &'static str {
        match self {
            ReportStatus::Converged => "",
            ReportStatus::MaxIterations => "\u{2021}",
            ReportStatus::TrueResidualAboveTol => "\u{22c6}",
            ReportStatus::FactorizationFailed => "\u{2020}",
            ReportStatus::ResourceExhausted => "\u{00a7}",
        }
    }
}

impl fmt::Display for ReportStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportStatus::Converged => "Converged",
            ReportStatus::MaxIterations => "MaxIterations",
            ReportStatus::TrueResidualAboveTol => "TrueResidualAboveTol",
            ReportStatus::FactorizationFailed => "FactorizationFailed",
            ReportStatus::ResourceExhausted => "ResourceExhausted",
        })
    }
}

/// Everything a result table row needs about one solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub case: SaddleCase,
    pub profile: ProfileName,
    pub m_orth_applied: bool,
    pub status: ReportStatus,
    pub outer_iterations: usize,
    /// Recomputed from the original blocks and right-hand side, never taken
    /// from solver by-products.
    pub final_true_relative_residual: f64,
    pub residual_history: Vec<f64>,
    pub avg_inner: InnerAverages,
    pub nnz_z: usize,
    pub nnz_u: usize,
    pub nnz_w: usize,
    pub nnz_zbar: usize,
    pub effective_rank: usize,
    /// Diagnostic message for FactorizationFailed / ResourceExhausted.
    pub failure: Option<String>,
}

impl SolveReport {
    /// Stored preconditioner nonzeros: basis + factor, plus the second
    /// basis and the orthonormalized copy when they exist.
    pub fn preconditioner_nnz(&self) -> usize {
        self.nnz_z + self.nnz_u + self.nnz_w + self.nnz_zbar
    }
}

/// A solve outcome: the block solution and its report.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub report: SolveReport,
}

fn true_relative_residual(problem: &SaddleProblem, xy: &[f64], rhs: &[f64]) -> f64 {
    let op = problem.operator();
    let mut kx = vec![0.0; rhs.len()];
    op.apply_into(xy, &mut kx);
    let rnorm = nrm2(
        &rhs.iter()
            .zip(&kx)
            .map(|(b, a)| b - a)
            .collect::<Vec<f64>>(),
    );
    let bnorm = nrm2(rhs);
    if bnorm == 0.0 {
        rnorm
    } else {
        rnorm / bnorm
    }
}

/// Runs one saddle-point solve end to end: assembles the preconditioner,
/// drives the outer flexible GMRES from the zero vector, and recomputes the
/// true relative residual for the report. Construction failures and
/// reduced-solve breakdowns are reported as `FactorizationFailed` rather
/// than returned as errors, so batch callers always get a row.
pub fn solve(problem: &SaddleProblem, options: &SolveOptions) -> SolveResult {
    let n = problem.n();
    let m = problem.m();
    let rhs = problem.rhs();
    let initial_rel = if nrm2(&rhs) == 0.0 { 0.0 } else { 1.0 };

    let prec = match assemble(problem, options) {
        Ok(prec) => prec,
        Err(fail) => {
            return SolveResult {
                x: vec![0.0; n],
                y: vec![0.0; m],
                report: SolveReport {
                    case: problem.case,
                    profile: options.profile.name,
                    m_orth_applied: false,
                    status: ReportStatus::FactorizationFailed,
                    outer_iterations: 0,
                    final_true_relative_residual: initial_rel,
                    residual_history: vec![initial_rel],
                    avg_inner: InnerAverages::default(),
                    nnz_z: fail.nnz_z,
                    nnz_u: fail.nnz_u,
                    nnz_w: 0,
                    nnz_zbar: fail.nnz_zbar,
                    effective_rank: 0,
                    failure: Some(fail.message),
                },
            }
        }
    };

    let mut tally = TallyingPrecond {
        prec: &prec,
        n,
        applies: 0,
        totals: StageCounts::default(),
    };
    let op = problem.operator();
    let outcome = fgmres(&op, &rhs, &mut tally, options.restart, &options.outer);
    let avg_inner = tally.averages();

    let report_base = |status, outer, true_rel, history, failure| SolveReport {
        case: problem.case,
        profile: options.profile.name,
        m_orth_applied: prec.m_orth_applied,
        status,
        outer_iterations: outer,
        final_true_relative_residual: true_rel,
        residual_history: history,
        avg_inner,
        nnz_z: prec.nnz_z,
        nnz_u: prec.nnz_u,
        nnz_w: prec.nnz_w,
        nnz_zbar: prec.nnz_zbar,
        effective_rank: prec.effective_rank,
        failure,
    };

    match outcome {
        Ok((xy, stats)) => {
            let true_rel = true_relative_residual(problem, &xy, &rhs);
            let status = match stats.status {
                SolveStatus::MaxIterations => ReportStatus::MaxIterations,
                SolveStatus::Converged | SolveStatus::Breakdown => {
                    if true_rel <= options.outer.rel_tol {
                        ReportStatus::Converged
                    } else {
                        ReportStatus::TrueResidualAboveTol
                    }
                }
            };
            let (x, y) = (xy[..n].to_vec(), xy[n..].to_vec());
            SolveResult {
                x,
                y,
                report: report_base(
                    status,
                    stats.iterations,
                    true_rel,
                    stats.residual_history,
                    None,
                ),
            }
        }
        Err(KrylovError::Preconditioner { message, stats }) => SolveResult {
            x: vec![0.0; n],
            y: vec![0.0; m],
            report: report_base(
                ReportStatus::FactorizationFailed,
                stats.iterations,
                initial_rel,
                stats.residual_history,
                Some(message),
            ),
        },
    }
}
