//! The command surface. Every flag is declared here so the whole grammar
//! reads in one place; the bodies live in `commands`.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "saddle",
    version,
    about = "Sparse saddle-point solver and benchmark runner"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve one problem from a saddle matrix file or a one-entry manifest
    Solve(SolveArgs),
    /// Generate a seeded random problem as Matrix Market block files
    GenRandom(GenRandomArgs),
    /// Download a collection matrix into the local cache
    Fetch(FetchArgs),
    /// Run a benchmark batch from a config file
    Bench(BenchArgs),
    /// Parse a matrix file and report shape, nonzeros, and partition
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProfileChoice {
    Large,
    Mix,
    Small,
    /// Zero drop tolerances, near-machine inner tolerances; for validation
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseChoice {
    /// Classify from the block values
    Auto,
    Symmetric,
    Generalized,
    General,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Matrix Market file of the full saddle matrix, or a .toml manifest
    /// with exactly one entry
    pub input: PathBuf,
    /// Tolerance profile
    #[arg(long, value_enum, default_value_t = ProfileChoice::Small)]
    pub profile: ProfileChoice,
    /// Saddle case; auto classifies from the blocks
    #[arg(long, value_enum, default_value_t = CaseChoice::Auto)]
    pub case: CaseChoice,
    /// Orthonormalize the nullspace basis in the metric of the leading
    /// block's symmetric part (applies when the constraint blocks match)
    #[arg(long)]
    pub m_orth: bool,
    /// Outer relative residual tolerance
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Outer iteration cap
    #[arg(long, default_value_t = 1000)]
    pub max_outer: usize,
    /// Outer restart length
    #[arg(long, default_value_t = 10)]
    pub restart: usize,
    /// Overrides the seed of a manifest entry generated from a random
    /// recipe; ignored for file-backed inputs
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the report row as CSV here
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Diagonal shift added to the projected symmetric part before its
    /// inverse factorization; the manual retry knob for solves that failed
    /// with an indefinite projected operator
    #[arg(long, default_value_t = 0.0)]
    pub ns_shift: f64,
    /// Leading block order of a square matrix file (with --m)
    #[arg(long, requires = "m")]
    pub n: Option<usize>,
    /// Constraint count of a square matrix file (with --n)
    #[arg(long, requires = "n")]
    pub m: Option<usize>,
    /// Cache directory for fetched matrices
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Base URL for collection downloads
    #[arg(long)]
    pub base_url: Option<String>,
    /// Exit 2 unless the solve converges
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args)]
pub struct GenRandomArgs {
    /// Leading block order
    #[arg(long)]
    pub n: usize,
    /// Constraint count
    #[arg(long)]
    pub m: usize,
    /// Per-entry inclusion probability of the random blocks
    #[arg(long)]
    pub density: f64,
    /// Scale of the identity perturbation added to each block
    #[arg(long, default_value_t = 0.1)]
    pub xi: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving the block files and their manifest
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FetchArgs {
    /// Collection group, e.g. Bai
    #[arg(long)]
    pub group: String,
    /// Matrix name within the group
    #[arg(long)]
    pub name: String,
    /// Base URL for collection downloads
    #[arg(long)]
    pub base_url: Option<String>,
    /// Cache directory
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Run configuration file
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cache directory for fetched matrices
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Base URL for collection downloads
    #[arg(long)]
    pub base_url: Option<String>,
    /// Exit 2 when any run fails to converge
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Matrix Market file
    pub input: PathBuf,
    /// Leading block order (with --m); inferred from the trailing zero
    /// block when omitted
    #[arg(long, requires = "m")]
    pub n: Option<usize>,
    /// Constraint count (with --n)
    #[arg(long, requires = "n")]
    pub m: Option<usize>,
}
