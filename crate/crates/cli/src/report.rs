//! Report emission: the results CSV, the residual-history JSON, the
//! final-residual CSV for plotting, and the human-readable tables.
//!
//! The results CSV has a fixed column set:
//!
//! ```text
//! problem, case, profile, m_orth, outer_iters, status, true_rel_residual,
//! nnz_Z, nnz_U, nnz_W, nnz_Zbar, avg_lsqr, avg_cg, avg_inner_fgmres, avg_mrs
//! ```
//!
//! Floats are written in Rust's shortest round-trip form and rows follow
//! the task order, so rerunning the same config yields byte-identical
//! files. Statuses are spelled out in the CSV; the human tables instead
//! annotate iteration counts with the footnote markers (a run that never
//! produced an iterate shows the marker alone). Averages are rounded to
//! one decimal in the human view only.

use crate::error::CliError;
use saddle_core::{ReportStatus, SolveReport, SolveStatus, SolverStats, ToleranceProfile};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

/// Profile label of baseline rows: restarted GMRES on the full system
/// with no preconditioner at all.
pub const BASELINE_PROFILE: &str = "baseline";

/// The tolerance bundle a run used, echoed into the JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileParams {
    pub name: String,
    pub tau_saroc: f64,
    pub rho_saroc: f64,
    pub tau_fsai: f64,
    pub rho_fsai: f64,
    pub tau_mgs: f64,
    pub w_mgs: usize,
    pub eps_in: f64,
    pub eps_innermost: f64,
}

impl From<&ToleranceProfile> for ProfileParams {
    fn from(p: &ToleranceProfile) -> Self {
        ProfileParams {
            name: p.name.to_string(),
            tau_saroc: p.tau_saroc,
            rho_saroc: p.rho_saroc,
            tau_fsai: p.tau_fsai,
            rho_fsai: p.rho_fsai,
            tau_mgs: p.tau_mgs,
            w_mgs: p.w_mgs,
            eps_in: p.eps_in,
            eps_innermost: p.eps_innermost,
        }
    }
}

/// One run of one problem under one profile (or the baseline).
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub problem: String,
    pub case: String,
    pub profile: String,
    pub m_orth: bool,
    pub status: ReportStatus,
    pub outer_iters: usize,
    pub true_rel_residual: f64,
    pub nnz_z: usize,
    pub nnz_u: usize,
    pub nnz_w: usize,
    pub nnz_zbar: usize,
    pub avg_lsqr: f64,
    pub avg_cg: f64,
    pub avg_inner_fgmres: f64,
    pub avg_mrs: f64,
    pub profile_params: Option<ProfileParams>,
    pub failure: Option<String>,
    pub residual_history: Vec<f64>,
}

impl ReportRow {
    pub fn from_report(problem: &str, report: &SolveReport, params: &ToleranceProfile) -> Self {
        // The scheme solves two least-squares systems per application
        // (particular solution and recovery); the table reports their
        // pooled average.
        let avg_lsqr = (report.avg_inner.lsqr_particular + report.avg_inner.lsqr_recover) / 2.0;
        ReportRow {
            problem: problem.to_string(),
            case: report.case.to_string(),
            profile: report.profile.to_string(),
            m_orth: report.m_orth_applied,
            status: report.status,
            outer_iters: report.outer_iterations,
            true_rel_residual: report.final_true_relative_residual,
            nnz_z: report.nnz_z,
            nnz_u: report.nnz_u,
            nnz_w: report.nnz_w,
            nnz_zbar: report.nnz_zbar,
            avg_lsqr,
            avg_cg: report.avg_inner.cg,
            avg_inner_fgmres: report.avg_inner.inner_fgmres,
            avg_mrs: report.avg_inner.mrs,
            profile_params: Some(ProfileParams::from(params)),
            failure: report.failure.clone(),
            residual_history: report.residual_history.clone(),
        }
    }

    pub fn from_baseline(
        problem: &str,
        case: &str,
        stats: &SolverStats,
        true_rel_residual: f64,
        tol: f64,
    ) -> Self {
        let status = match stats.status {
            SolveStatus::MaxIterations => ReportStatus::MaxIterations,
            SolveStatus::Converged | SolveStatus::Breakdown => {
                if true_rel_residual <= tol {
                    ReportStatus::Converged
                } else {
                    ReportStatus::TrueResidualAboveTol
                }
            }
        };
        ReportRow {
            problem: problem.to_string(),
            case: case.to_string(),
            profile: BASELINE_PROFILE.to_string(),
            m_orth: false,
            status,
            outer_iters: stats.iterations,
            true_rel_residual,
            nnz_z: 0,
            nnz_u: 0,
            nnz_w: 0,
            nnz_zbar: 0,
            avg_lsqr: 0.0,
            avg_cg: 0.0,
            avg_inner_fgmres: 0.0,
            avg_mrs: 0.0,
            profile_params: None,
            failure: None,
            residual_history: stats.residual_history.clone(),
        }
    }

    /// A placeholder row for a run that panicked instead of returning.
    pub fn exhausted(problem: &str, case: &str, profile: &str, message: String) -> Self {
        ReportRow {
            problem: problem.to_string(),
            case: case.to_string(),
            profile: profile.to_string(),
            m_orth: false,
            status: ReportStatus::ResourceExhausted,
            outer_iters: 0,
            true_rel_residual: f64::NAN,
            nnz_z: 0,
            nnz_u: 0,
            nnz_w: 0,
            nnz_zbar: 0,
            avg_lsqr: 0.0,
            avg_cg: 0.0,
            avg_inner_fgmres: 0.0,
            avg_mrs: 0.0,
            profile_params: None,
            failure: Some(message),
            residual_history: Vec::new(),
        }
    }

    pub fn preconditioner_nnz(&self) -> usize {
        self.nnz_z + self.nnz_u + self.nnz_w + self.nnz_zbar
    }

    /// Iteration count annotated with the status marker; runs without an
    /// iterate render as the marker alone.
    pub fn iteration_cell(&self) -> String {
        match self.status {
            ReportStatus::Converged => self.outer_iters.to_string(),
            ReportStatus::MaxIterations | ReportStatus::TrueResidualAboveTol => {
                format!("{}{}", self.outer_iters, self.status.marker())
            }
            ReportStatus::FactorizationFailed | ReportStatus::ResourceExhausted => {
                self.status.marker().to_string()
            }
        }
    }
}

fn runtime_io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::runtime(format!("cannot write {}: {e}", path.display()))
}

pub fn write_results_csv(rows: &[ReportRow], path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| runtime_io(path, e))?;
    w.write_record([
        "problem",
        "case",
        "profile",
        "m_orth",
        "outer_iters",
        "status",
        "true_rel_residual",
        "nnz_Z",
        "nnz_U",
        "nnz_W",
        "nnz_Zbar",
        "avg_lsqr",
        "avg_cg",
        "avg_inner_fgmres",
        "avg_mrs",
    ])
    .map_err(|e| runtime_io(path, e))?;
    for r in rows {
        w.write_record([
            r.problem.clone(),
            r.case.clone(),
            r.profile.clone(),
            r.m_orth.to_string(),
            r.outer_iters.to_string(),
            r.status.to_string(),
            r.true_rel_residual.to_string(),
            r.nnz_z.to_string(),
            r.nnz_u.to_string(),
            r.nnz_w.to_string(),
            r.nnz_zbar.to_string(),
            r.avg_lsqr.to_string(),
            r.avg_cg.to_string(),
            r.avg_inner_fgmres.to_string(),
            r.avg_mrs.to_string(),
        ])
        .map_err(|e| runtime_io(path, e))?;
    }
    w.flush().map_err(|e| runtime_io(path, e))
}

/// The figures' underlying data: one final true residual per run.
pub fn write_finals_csv(rows: &[ReportRow], path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| runtime_io(path, e))?;
    w.write_record(["problem", "case", "profile", "m_orth", "true_rel_residual"])
        .map_err(|e| runtime_io(path, e))?;
    for r in rows {
        w.write_record([
            r.problem.clone(),
            r.case.clone(),
            r.profile.clone(),
            r.m_orth.to_string(),
            r.true_rel_residual.to_string(),
        ])
        .map_err(|e| runtime_io(path, e))?;
    }
    w.flush().map_err(|e| runtime_io(path, e))
}

/// Everything the residual plots and rerun audits need: the protocol
/// constants and every run with its full outer history.
#[derive(Serialize)]
pub struct ResidualReport<'a> {
    pub seed: u64,
    pub outer_tol: f64,
    pub max_outer: usize,
    pub restart: usize,
    pub m_orth_requested: bool,
    pub runs: &'a [ReportRow],
}

pub fn write_residuals_json(report: &ResidualReport, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| runtime_io(path, e))
}

fn layout(title: &str, header: &[String], cells: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in cells {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let line = |row: &[String]| -> String {
        let mut s = String::new();
        for (k, cell) in row.iter().enumerate() {
            if k == 0 {
                s.push_str(&format!("  {:<width$}", cell, width = widths[0]));
            } else {
                s.push_str(&format!("  {:>width$}", cell, width = widths[k]));
            }
        }
        s
    };
    let _ = writeln!(out, "{}", line(header));
    let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", line(&dashes));
    for row in cells {
        let _ = writeln!(out, "{}", line(row));
    }
    out
}

/// Renders the three summary tables: problems as rows in first-appearance
/// order, profiles as columns.
pub fn render_tables(rows: &[ReportRow]) -> String {
    let mut problems: Vec<&str> = Vec::new();
    let mut profiles: Vec<&str> = Vec::new();
    let mut index: HashMap<(&str, &str), &ReportRow> = HashMap::new();
    for r in rows {
        if !problems.contains(&r.problem.as_str()) {
            problems.push(&r.problem);
        }
        if !profiles.contains(&r.profile.as_str()) {
            profiles.push(&r.profile);
        }
        index.insert((r.problem.as_str(), r.profile.as_str()), r);
    }

    let mut header: Vec<String> = vec!["problem".to_string()];
    header.extend(profiles.iter().map(|p| p.to_string()));

    let table = |cell: &dyn Fn(&ReportRow) -> String| -> Vec<Vec<String>> {
        problems
            .iter()
            .map(|problem| {
                let mut row = vec![problem.to_string()];
                for profile in &profiles {
                    row.push(match index.get(&(*problem, *profile)) {
                        Some(r) => cell(r),
                        None => "-".to_string(),
                    });
                }
                row
            })
            .collect()
    };

    let iters = table(&|r| r.iteration_cell());
    let nnz = table(&|r| {
        if r.profile == BASELINE_PROFILE {
            "-".to_string()
        } else {
            r.preconditioner_nnz().to_string()
        }
    });
    let avgs = table(&|r| {
        if r.profile == BASELINE_PROFILE {
            "-".to_string()
        } else {
            format!(
                "{:.1}/{:.1}/{:.1}/{:.1}",
                r.avg_lsqr, r.avg_cg, r.avg_inner_fgmres, r.avg_mrs
            )
        }
    });

    let mut out = String::new();
    out.push_str(&layout("outer iterations", &header, &iters));
    out.push('\n');
    out.push_str(&layout("preconditioner nonzeros", &header, &nnz));
    out.push('\n');
    out.push_str(&layout(
        "average inner iterations (lsqr/cg/fgmres/mrs)",
        &header,
        &avgs,
    ));
    out
}
