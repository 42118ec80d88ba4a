//! End-to-end checks of the `saddle` binary: command surface, exit codes,
//! and report files, all inside temporary directories.

use std::path::Path;
use std::process::{Command, Output};

fn saddle() -> Command {
    Command::new(env!("CARGO_BIN_EXE_saddle"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// The 3x3 saddle system whose blocks are A = I2, B = C = (1, 0)^T.
fn write_toy(path: &Path) {
    std::fs::write(
        path,
        "%%MatrixMarket matrix coordinate real general\n\
         3 3 4\n1 1 1.0\n2 2 1.0\n1 3 1.0\n3 1 -1.0\n",
    )
    .unwrap();
}

#[test]
fn solve_reports_the_toy_problem_and_writes_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let mtx = dir.path().join("toy.mtx");
    let out = dir.path().join("row.csv");
    write_toy(&mtx);

    let result = run(saddle().arg("solve").arg(&mtx).arg("--out").arg(&out));
    assert!(result.status.success(), "stderr: {}", stderr(&result));
    let line = stdout(&result);
    assert!(line.contains("toy:"), "summary line: {line}");
    assert!(line.contains("case=symmetric"));
    assert!(line.contains("status=Converged"));
    assert!(
        stderr(&result).contains("partition inferred as n = 2, m = 1"),
        "stderr: {}",
        stderr(&result)
    );

    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("problem,case,profile,m_orth,outer_iters,status,true_rel_residual"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("toy,symmetric,small,false,"));
    assert!(row.contains("Converged"));
    let residual: f64 = row.split(',').nth(6).unwrap().parse().unwrap();
    assert!(residual <= 1e-5, "true residual {residual}");
}

#[test]
fn gen_random_is_deterministic_and_solvable_through_its_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let result = run(saddle()
            .args(["gen-random", "--n", "30", "--m", "10", "--density", "0.05"])
            .args(["--xi", "0.1", "--seed", "7", "--out"])
            .arg(out));
        assert!(result.status.success(), "stderr: {}", stderr(&result));
    }
    let stem = "random-30x10-d0.05-s7";
    for suffix in [".A.mtx", ".B.mtx", ".C.mtx", ".rhs.mtx", ".toml"] {
        let a = std::fs::read(out_a.join(format!("{stem}{suffix}"))).unwrap();
        let b = std::fs::read(out_b.join(format!("{stem}{suffix}"))).unwrap();
        assert_eq!(a, b, "{suffix} differs between identical runs");
    }

    let result = run(saddle()
        .arg("solve")
        .arg(out_a.join(format!("{stem}.toml")))
        .args(["--profile", "exact"]));
    assert!(result.status.success(), "stderr: {}", stderr(&result));
    assert!(stdout(&result).contains("case=general"));
}

#[test]
fn bench_rejects_a_config_without_entries() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("empty.toml");
    std::fs::write(&config, "profiles = [\"small\"]\n").unwrap();
    let result = run(saddle().arg("bench").arg("--config").arg(&config));
    assert_eq!(result.status.code(), Some(1));
    assert!(stderr(&result).contains("no problems"));
}

#[test]
fn bench_writes_reports_and_echoes_profile_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        r#"
            profiles = ["large", "small"]
            baseline = true
            output_dir = "reports"

            [[entry]]
            name = "r1"
            random = { n = 30, m = 8, density = 0.05, xi = 0.1, seed = 1 }

            [[entry]]
            name = "r2"
            random = { n = 24, m = 6, density = 0.05, xi = 0.1, seed = 2 }
        "#,
    )
    .unwrap();

    let result = run(saddle().arg("bench").arg("--config").arg(&config));
    assert!(result.status.success(), "stderr: {}", stderr(&result));
    let text = stdout(&result);
    assert!(text.contains("outer iterations"));
    assert!(text.contains("preconditioner nonzeros"));

    let reports = dir.path().join("reports");
    let results = std::fs::read_to_string(reports.join("results.csv")).unwrap();
    // Two entries times (two profiles + baseline), plus the header.
    assert_eq!(results.lines().count(), 1 + 2 * 3);
    let finals = std::fs::read_to_string(reports.join("final_residuals.csv")).unwrap();
    assert_eq!(finals.lines().count(), 1 + 2 * 3);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(reports.join("residuals.json")).unwrap())
            .unwrap();
    let runs = json["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 6);
    let small_run = runs
        .iter()
        .find(|r| r["profile"] == "small")
        .expect("a small-profile run");
    assert_eq!(small_run["profile_params"]["eps_in"], 1e-5);
    assert_eq!(small_run["profile_params"]["eps_innermost"], 1e-5);
    // Every run carries a history; iterating runs have more than the
    // initial residual (a failed assembly legitimately stops at one).
    for r in runs {
        assert!(!r["residual_history"].as_array().unwrap().is_empty());
    }
    assert!(runs
        .iter()
        .any(|r| r["residual_history"].as_array().unwrap().len() >= 2));
    let baseline_run = runs
        .iter()
        .find(|r| r["profile"] == "baseline")
        .expect("a baseline run");
    assert!(baseline_run["profile_params"].is_null());
}

/// A = -I2 makes the projected operator negative definite, so assembly
/// must fail; without --strict that is a recorded row, with it an exit 2.
#[test]
fn strict_turns_assembly_failures_into_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let mtx = dir.path().join("negdef.mtx");
    std::fs::write(
        &mtx,
        "%%MatrixMarket matrix coordinate real general\n\
         3 3 4\n1 1 -1.0\n2 2 -1.0\n1 3 1.0\n3 1 -1.0\n",
    )
    .unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "profiles = [\"small\"]\noutput_dir = \"reports\"\n\n\
         [[entry]]\nname = \"negdef\"\npath = \"negdef.mtx\"\nn = 2\nm = 1\n",
    )
    .unwrap();

    let relaxed = run(saddle().arg("bench").arg("--config").arg(&config));
    assert!(relaxed.status.success(), "stderr: {}", stderr(&relaxed));
    let results = std::fs::read_to_string(dir.path().join("reports").join("results.csv")).unwrap();
    assert!(results.contains("FactorizationFailed"));
    assert!(stderr(&relaxed).contains("not positive definite"));

    let strict = run(saddle()
        .arg("bench")
        .arg("--config")
        .arg(&config)
        .arg("--strict"));
    assert_eq!(strict.status.code(), Some(2));
    assert!(stderr(&strict).contains("did not converge"));
}

#[test]
fn fetch_failures_report_the_attempted_url() {
    let dir = tempfile::tempdir().unwrap();
    let result = run(saddle()
        .args(["fetch", "--group", "G", "--name", "nosuch"])
        .arg("--cache")
        .arg(dir.path())
        .args(["--base-url", "http://127.0.0.1:1"]));
    assert_eq!(result.status.code(), Some(2));
    assert!(
        stderr(&result).contains("http://127.0.0.1:1/G/nosuch.tar.gz"),
        "stderr: {}",
        stderr(&result)
    );
}

#[test]
fn validate_reports_partition_case_and_trailing_block() {
    let dir = tempfile::tempdir().unwrap();
    let mtx = dir.path().join("toy.mtx");
    write_toy(&mtx);
    let result = run(saddle().arg("validate").arg(&mtx));
    assert!(result.status.success());
    let text = stdout(&result);
    assert!(text.contains("3 x 3, 4 stored entries"));
    assert!(text.contains("partition (inferred): n = 2, m = 1"));
    assert!(text.contains("case: symmetric"));
    assert!(text.contains("trailing block is empty"));

    // A value stored inside the trailing block is reported, not fatal.
    let dirty = dir.path().join("dirty.mtx");
    std::fs::write(
        &dirty,
        "%%MatrixMarket matrix coordinate real general\n\
         3 3 5\n1 1 1.0\n2 2 1.0\n1 3 1.0\n3 1 -1.0\n3 3 0.5\n",
    )
    .unwrap();
    let result = run(saddle()
        .arg("validate")
        .arg(&dirty)
        .args(["--n", "2", "--m", "1"]));
    assert!(result.status.success());
    assert!(stdout(&result).contains("1 stored entries"));
    assert!(stdout(&result).contains("partition (given)"));
}

#[test]
fn m_orth_request_on_a_general_problem_is_noted_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let result = run(saddle()
        .args(["gen-random", "--n", "25", "--m", "8", "--density", "0.08"])
        .args(["--xi", "0.1", "--seed", "3", "--out"])
        .arg(dir.path()));
    assert!(result.status.success(), "stderr: {}", stderr(&result));

    let manifest = dir.path().join("random-25x8-d0.08-s3.toml");
    let result = run(saddle()
        .arg("solve")
        .arg(&manifest)
        .args(["--profile", "exact", "--m-orth"]));
    assert!(result.status.success(), "stderr: {}", stderr(&result));
    assert!(
        stderr(&result).contains("orthonormalization requested but not applied"),
        "stderr: {}",
        stderr(&result)
    );
}
