//! Solvers for sparse saddle-point systems
//!
//! ```text
//!     [ A    B ] [x]   [f]
//!     [-C^T  0 ] [y] = [g]
//! ```
//!
//! with `A` an n-by-n matrix whose symmetric part is positive semidefinite
//! and `B`, `C` n-by-m of rank k <= m <= n. The preconditioner combines a
//! pivoted conjugation pass that builds sparse approximate nullspace bases
//! for `B^T` and `C^T`, a factored approximate inverse of the projected
//! operator, and an optional windowed M-orthonormalization of the basis.
//! The preconditioned system is driven by flexible GMRES on the outside,
//! LSQR/CG/flexible GMRES stages inside the preconditioner, and a minimal
//! residual iteration specialized to shifted skew-symmetric systems at the
//! innermost level.
//!
//! Module map:
//! - [`sparse`]: compressed sparse column storage and the drop-tolerance
//!   vector kernels every factorization pass shares.
//! - [`operator`]: lazily composed linear operators (products, sums, scalar
//!   multiples, transposes) that are applied without materializing.
//! - [`krylov`]: GMRES, flexible GMRES, CG, LSQR, and the skew-specific
//!   minimal residual solver, all with per-iteration residual histories.
//! - [`nullspace`]: the pivoted nullspace-basis construction and the
//!   windowed M-orthonormalization pass.
//! - [`fsai`]: the factored sparse approximate inverse of a symmetric
//!   positive definite operator.
//! - [`scheme`]: case detection, preconditioner assembly, the staged
//!   preconditioner application, and the outer solve with its report.
//! - [`corpus`]: Matrix Market IO, saddle partitioning of square matrices,
//!   seeded random problem generation, manifests, and a cached fetcher for
//!   the public sparse matrix collection.

pub mod corpus;
pub mod fsai;
pub mod krylov;
pub mod nullspace;
pub mod operator;
pub mod scheme;
pub mod sparse;

pub use fsai::{apply_split_preconditioned, fsai, FsaiError, FsaiFactor, FsaiParams};
pub use krylov::{
    cg, fgmres, gmres, lsqr, mrs, IdentityPreconditioner, KrylovError, Preconditioner, SolveStatus,
    SolverStats, StopCriteria,
};
pub use nullspace::{
    mgs_m_orthonormalize, nullspace_residual, saroc, NullspaceBasis, OrthoError, SarocParams,
};
pub use operator::{LinearOperator, Op};
pub use scheme::{
    detect_case, solve, InnerAverages, ProfileName, ReportStatus, SaddleCase, SaddleProblem,
    SchemeError, SolveOptions, SolveReport, SolveResult, ToleranceProfile,
};
pub use sparse::{SparseError, SparseMatrix, SparseVector};

/// Dense vectors are plain `Vec<f64>`; the alias documents intent in
/// signatures that mix dense and sparse arguments.
pub type DenseVector = Vec<f64>;
