//! The batch engine behind `bench`: loads every entry up front, runs the
//! entry-by-profile grid in a worker pool, and writes the three report
//! files. Tasks are independent solves; results are collected in task
//! order so reruns of one config produce identical reports. A task that
//! panics (allocation failure included) is recorded as a ResourceExhausted
//! row instead of taking the batch down.

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{
    write_finals_csv, write_residuals_json, write_results_csv, ReportRow, ResidualReport,
    BASELINE_PROFILE,
};
use rayon::prelude::*;
use saddle_core::corpus::{load_entry, FetchSettings, LoadedProblem};
use saddle_core::{
    gmres, solve, LinearOperator, ProfileName, ReportStatus, SaddleProblem, SolveOptions,
    StopCriteria, ToleranceProfile,
};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

pub fn profile_of(name: ProfileName) -> ToleranceProfile {
    match name {
        ProfileName::Large => ToleranceProfile::large(),
        ProfileName::Mix => ToleranceProfile::mix(),
        ProfileName::Small => ToleranceProfile::small(),
        ProfileName::Exact => ToleranceProfile::exact(),
    }
}

pub fn options_for(config: &RunConfig, name: ProfileName) -> SolveOptions {
    let mut options = SolveOptions::with_profile(profile_of(name));
    options.m_orth = config.m_orth;
    options.outer = StopCriteria::new(config.outer_tol, config.max_outer);
    options.restart = config.restart;
    options
}

/// `||rhs - K xy|| / ||rhs||` recomputed from the blocks, independent of
/// any solver by-product.
pub fn true_relative_residual(problem: &SaddleProblem, xy: &[f64]) -> f64 {
    let rhs = problem.rhs();
    let op = problem.operator();
    let mut kx = vec![0.0; rhs.len()];
    op.apply_into(xy, &mut kx);
    let rnorm = rhs
        .iter()
        .zip(&kx)
        .map(|(b, a)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    let bnorm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        rnorm
    } else {
        rnorm / bnorm
    }
}

enum TaskKind {
    Profile(ProfileName),
    Baseline,
}

struct Task<'a> {
    loaded: &'a LoadedProblem,
    kind: TaskKind,
}

fn panic_text(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(text) = payload.downcast_ref::<String>() {
        text.clone()
    } else if let Some(text) = payload.downcast_ref::<&str>() {
        (*text).to_string()
    } else {
        "task panicked".to_string()
    }
}

fn run_task(task: &Task, config: &RunConfig) -> ReportRow {
    let problem = &task.loaded.problem;
    let name = task.loaded.name.as_str();
    let label = match &task.kind {
        TaskKind::Profile(p) => p.to_string(),
        TaskKind::Baseline => BASELINE_PROFILE.to_string(),
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| match &task.kind {
        TaskKind::Profile(profile_name) => {
            let options = options_for(config, *profile_name);
            let result = solve(problem, &options);
            ReportRow::from_report(name, &result.report, &options.profile)
        }
        TaskKind::Baseline => {
            let op = problem.operator();
            let rhs = problem.rhs();
            let stop = StopCriteria::new(config.outer_tol, config.max_outer);
            let (xy, stats) = gmres(&op, &rhs, config.restart, &stop);
            let true_rel = true_relative_residual(problem, &xy);
            ReportRow::from_baseline(
                name,
                &problem.case.to_string(),
                &stats,
                true_rel,
                config.outer_tol,
            )
        }
    }));
    outcome.unwrap_or_else(|payload| {
        ReportRow::exhausted(name, &problem.case.to_string(), &label, panic_text(payload))
    })
}

pub struct BenchReports {
    pub rows: Vec<ReportRow>,
    /// Human-directed remarks: partition warnings, orthonormalization
    /// requests that could not apply, per-run failure diagnostics.
    pub notices: Vec<String>,
    /// Runs whose status is anything but Converged.
    pub failed_runs: usize,
    pub files: Vec<PathBuf>,
}

pub fn run_benchmark(
    config: &RunConfig,
    settings: &FetchSettings,
) -> Result<BenchReports, CliError> {
    let mut notices = Vec::new();
    let mut loaded = Vec::with_capacity(config.entries.len());
    for entry in &config.entries {
        let lp = load_entry(entry, settings)?;
        if let Some(warning) = &lp.partition_warning {
            notices.push(format!("{}: {warning}", lp.name));
        }
        loaded.push(lp);
    }

    let mut tasks = Vec::new();
    for lp in &loaded {
        for profile in config.profiles() {
            tasks.push(Task {
                loaded: lp,
                kind: TaskKind::Profile(*profile),
            });
        }
        if config.baseline {
            tasks.push(Task {
                loaded: lp,
                kind: TaskKind::Baseline,
            });
        }
    }

    let rows: Vec<ReportRow> = tasks.par_iter().map(|t| run_task(t, config)).collect();

    for row in &rows {
        if config.m_orth && row.profile != BASELINE_PROFILE && !row.m_orth {
            notices.push(format!(
                "{} ({}): orthonormalization requested but not applied (the two constraint blocks differ)",
                row.problem, row.profile
            ));
        }
        if let Some(failure) = &row.failure {
            notices.push(format!("{} ({}): {failure}", row.problem, row.profile));
        }
    }
    let failed_runs = rows
        .iter()
        .filter(|r| r.status != ReportStatus::Converged)
        .count();

    std::fs::create_dir_all(&config.output_dir).map_err(|e| {
        CliError::runtime(format!(
            "cannot create output directory {}: {e}",
            config.output_dir.display()
        ))
    })?;
    let results = config.output_dir.join("results.csv");
    let finals = config.output_dir.join("final_residuals.csv");
    let residuals = config.output_dir.join("residuals.json");
    write_results_csv(&rows, &results)?;
    write_finals_csv(&rows, &finals)?;
    write_residuals_json(
        &ResidualReport {
            seed: config.seed,
            outer_tol: config.outer_tol,
            max_outer: config.max_outer,
            restart: config.restart,
            m_orth_requested: config.m_orth,
            runs: &rows,
        },
        &residuals,
    )?;

    Ok(BenchReports {
        rows,
        notices,
        failed_runs,
        files: vec![results, finals, residuals],
    })
}
