//! `saddle`: solve sparse saddle-point systems and benchmark the layered
//! preconditioning schemes over problem batteries.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, malformed
//! inputs or configs), 2 for runtime failures (fetch or report IO
//! problems, and non-converged runs under `--strict`).

mod args;
mod commands;
mod config;
mod error;
mod inputs;
mod report;
mod runner;

use args::{Cli, Command};
use clap::Parser;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land here too; only real parse
            // failures are usage errors.
            let code = i32::from(e.use_stderr());
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = match &cli.command {
        Command::Solve(args) => commands::solve_cmd(args),
        Command::GenRandom(args) => commands::gen_random_cmd(args),
        Command::Fetch(args) => commands::fetch_cmd(args),
        Command::Bench(args) => commands::bench_cmd(args),
        Command::Validate(args) => commands::validate_cmd(args),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
