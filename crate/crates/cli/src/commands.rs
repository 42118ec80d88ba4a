//! The five subcommand bodies. Argument structs live in `main.rs` next to
//! the parser; everything here takes them by reference and returns the
//! classified error that decides the exit code.

use crate::args::{
    BenchArgs, CaseChoice, FetchArgs, GenRandomArgs, ProfileChoice, SolveArgs, ValidateArgs,
};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::inputs::{infer_partition, load_square_matrix};
use crate::report::{render_tables, write_results_csv, ReportRow};
use crate::runner::{profile_of, run_benchmark};
use saddle_core::corpus::{
    fetch_suitesparse, gen_random_saddle, load_entry, read_matrix_market, write_matrix_market,
    write_vector, CorpusEntry, FetchSettings, Manifest, RandomSaddleSpec,
};
use saddle_core::{
    detect_case, solve, ProfileName, ReportStatus, SaddleCase, SaddleProblem, SolveOptions,
    StopCriteria,
};
use std::path::{Path, PathBuf};

impl ProfileChoice {
    pub fn name(self) -> ProfileName {
        match self {
            ProfileChoice::Large => ProfileName::Large,
            ProfileChoice::Mix => ProfileName::Mix,
            ProfileChoice::Small => ProfileName::Small,
            ProfileChoice::Exact => ProfileName::Exact,
        }
    }
}

impl CaseChoice {
    pub fn case(self) -> Option<SaddleCase> {
        match self {
            CaseChoice::Auto => None,
            CaseChoice::Symmetric => Some(SaddleCase::Symmetric),
            CaseChoice::Generalized => Some(SaddleCase::Generalized),
            CaseChoice::General => Some(SaddleCase::General),
        }
    }
}

fn fetch_settings(cache: &Option<PathBuf>, base_url: &Option<String>) -> FetchSettings {
    FetchSettings {
        cache_dir: cache.clone(),
        base_url: base_url.clone(),
    }
}

fn is_manifest(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("toml"))
}

/// Loads the solve input: a one-entry manifest or a square saddle matrix
/// file. Returns the problem name, the problem, and notes for stderr.
fn load_solve_input(args: &SolveArgs) -> Result<(String, SaddleProblem, Vec<String>), CliError> {
    let partition = match (args.n, args.m) {
        (Some(n), Some(m)) => Some((n, m)),
        (None, None) => None,
        _ => return Err(CliError::usage("--n and --m must be given together")),
    };
    if is_manifest(&args.input) {
        let manifest = Manifest::load(&args.input)?;
        let mut entry = match manifest.entries.as_slice() {
            [entry] => entry.clone(),
            entries => {
                return Err(CliError::usage(format!(
                    "{} has {} entries; solve runs exactly one (use bench for batches)",
                    args.input.display(),
                    entries.len()
                )))
            }
        };
        if let (Some(seed), Some(spec)) = (args.seed, entry.random.as_mut()) {
            spec.seed = seed;
        }
        let settings = fetch_settings(&args.cache, &args.base_url);
        let loaded = load_entry(&entry, &settings)?;
        let mut problem = loaded.problem;
        if let Some(case) = args.case.case() {
            let SaddleProblem { a, b, c, f, g, .. } = problem;
            problem = SaddleProblem::with_case(a, b, c, f, g, case)?;
        }
        Ok((
            loaded.name,
            problem,
            loaded.partition_warning.into_iter().collect(),
        ))
    } else {
        let input = load_square_matrix(&args.input, partition, args.case.case())?;
        let mut notes: Vec<String> = input.partition_warning.into_iter().collect();
        if let Some((n, m)) = input.inferred {
            notes.push(format!("partition inferred as n = {n}, m = {m}"));
        }
        Ok((input.name, input.problem, notes))
    }
}

pub fn solve_cmd(args: &SolveArgs) -> Result<(), CliError> {
    let (name, problem, notes) = load_solve_input(args)?;
    for note in &notes {
        eprintln!("note: {name}: {note}");
    }

    let mut options = SolveOptions::with_profile(profile_of(args.profile.name()));
    options.m_orth = args.m_orth;
    options.outer = StopCriteria::new(args.tol, args.max_outer);
    options.restart = args.restart;
    options.ns_shift = args.ns_shift;

    let result = solve(&problem, &options);
    let report = &result.report;
    if args.m_orth && !report.m_orth_applied {
        eprintln!(
            "note: {name}: orthonormalization requested but not applied (the two constraint blocks differ)"
        );
    }
    if let Some(failure) = &report.failure {
        eprintln!("note: {name}: {failure}");
    }

    let row = ReportRow::from_report(&name, report, &options.profile);
    println!(
        "{name}: case={} profile={} outer={}{} status={} true_rel_residual={:.3e} precond_nnz={}",
        row.case,
        row.profile,
        row.outer_iters,
        report.status.marker(),
        report.status,
        row.true_rel_residual,
        row.preconditioner_nnz(),
    );
    if let Some(out) = &args.out {
        write_results_csv(std::slice::from_ref(&row), out)?;
    }

    if args.strict && report.status != ReportStatus::Converged {
        return Err(CliError::runtime(format!(
            "{name} did not converge: {}",
            report.status
        )));
    }
    Ok(())
}

pub fn gen_random_cmd(args: &GenRandomArgs) -> Result<(), CliError> {
    let spec = RandomSaddleSpec {
        n: args.n,
        m: args.m,
        density: args.density,
        xi: args.xi,
        seed: args.seed,
    };
    spec.validate()?;
    let problem = gen_random_saddle(&spec)?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", args.out.display())))?;
    let stem = format!(
        "random-{}x{}-d{}-s{}",
        args.n, args.m, args.density, args.seed
    );
    let prefix = args.out.join(&stem);
    let with_suffix = |suffix: &str| {
        let mut name = prefix.clone().into_os_string();
        name.push(suffix);
        PathBuf::from(name)
    };

    write_matrix_market(&problem.a, with_suffix(".A.mtx"))?;
    write_matrix_market(&problem.b, with_suffix(".B.mtx"))?;
    write_matrix_market(&problem.c, with_suffix(".C.mtx"))?;
    let mut rhs = problem.f.clone();
    rhs.extend_from_slice(&problem.g);
    write_vector(&rhs, with_suffix(".rhs.mtx"))?;

    let manifest = Manifest {
        entries: vec![CorpusEntry {
            name: stem.clone(),
            group: None,
            path: None,
            blocks: Some(PathBuf::from(&stem)),
            random: None,
            n: None,
            m: None,
            case: Some(problem.case.to_string()),
        }],
    };
    let manifest_path = with_suffix(".toml");
    manifest.save(&manifest_path)?;

    println!(
        "wrote {}.{{A,B,C,rhs}}.mtx and {}",
        prefix.display(),
        manifest_path.display()
    );
    Ok(())
}

pub fn fetch_cmd(args: &FetchArgs) -> Result<(), CliError> {
    let settings = fetch_settings(&args.cache, &args.base_url);
    let path = fetch_suitesparse(&args.group, &args.name, &settings)?;
    println!("{}", path.display());
    Ok(())
}

pub fn bench_cmd(args: &BenchArgs) -> Result<(), CliError> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(out) = &args.out {
        config.output_dir = out.clone();
    }
    let settings = fetch_settings(&args.cache, &args.base_url);
    let reports = run_benchmark(&config, &settings)?;
    for notice in &reports.notices {
        eprintln!("note: {notice}");
    }
    print!("{}", render_tables(&reports.rows));
    for file in &reports.files {
        println!("wrote {}", file.display());
    }
    if args.strict && reports.failed_runs > 0 {
        return Err(CliError::runtime(format!(
            "{} of {} runs did not converge",
            reports.failed_runs,
            reports.rows.len()
        )));
    }
    Ok(())
}

pub fn validate_cmd(args: &ValidateArgs) -> Result<(), CliError> {
    let w = read_matrix_market(&args.input)?;
    println!(
        "{}: {} x {}, {} stored entries",
        args.input.display(),
        w.nrows(),
        w.ncols(),
        w.nnz()
    );
    if w.nrows() != w.ncols() {
        println!("not square; no saddle partition applies");
        return Ok(());
    }
    let partition = match (args.n, args.m) {
        (Some(n), Some(m)) => Some(((n, m), "given")),
        (None, None) => infer_partition(&w).map(|nm| (nm, "inferred")),
        _ => return Err(CliError::usage("--n and --m must be given together")),
    };
    let Some(((n, m), origin)) = partition else {
        println!("no trailing zero block; pass --n and --m to check a partition");
        return Ok(());
    };
    let blocks = saddle_core::corpus::partition_saddle(&w, n, m)
        .map_err(|e| CliError::usage(e.to_string()))?;
    println!("partition ({origin}): n = {n}, m = {m}");
    println!(
        "blocks: A {}x{} ({} nnz), B {}x{} ({} nnz), C {}x{} ({} nnz)",
        blocks.a.nrows(),
        blocks.a.ncols(),
        blocks.a.nnz(),
        blocks.b.nrows(),
        blocks.b.ncols(),
        blocks.b.nnz(),
        blocks.c.nrows(),
        blocks.c.ncols(),
        blocks.c.nnz()
    );
    if blocks.discarded_nnz > 0 {
        println!(
            "warning: trailing block holds {} stored entries; they are not part of a saddle system and were ignored",
            blocks.discarded_nnz
        );
    } else {
        println!("trailing block is empty, as a saddle system requires");
    }
    println!("case: {}", detect_case(&blocks.a, &blocks.b, &blocks.c));
    Ok(())
}
