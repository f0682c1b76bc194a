//! `normaloid`: classify matrices, run the theorem suites, generate class
//! members and emit pencil scans.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normaloid::config::Profile;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "normaloid", version, about = "Numerical membership tests for normaloid-type operator classes")]
struct Cli {
    /// Tolerance profile; individual values can be overridden with NORMALOID_* variables.
    #[arg(long, value_enum, global = true, default_value_t = ToleranceProfile::Default)]
    tolerance: ToleranceProfile,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ToleranceProfile {
    Default,
    Strict,
    Loose,
}

impl From<ToleranceProfile> for Profile {
    fn from(p: ToleranceProfile) -> Self {
        match p {
            ToleranceProfile::Default => Profile::Default,
            ToleranceProfile::Strict => Profile::Strict,
            ToleranceProfile::Loose => Profile::Loose,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a matrix file and print the report as JSON.
    Classify(ClassifyArgs),
    /// Run theorem suites and write the results file.
    Verify(VerifyArgs),
    /// Generate a member of a constructible class.
    Generate(GenerateArgs),
    /// Emit `lambda,min_eig` rows of the absolute-(p,r) pencil.
    PencilScan(ScanArgs),
    /// List the bundled fixtures.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    matrix: PathBuf,
    #[arg(long = "p", value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    p_list: Vec<f64>,
    #[arg(long = "r", value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    r_list: Vec<f64>,
    #[arg(long = "k", value_delimiter = ',', default_values_t = [1.0, 2.0])]
    k_list: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Theorem id, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory with `registry.json` and matrix files to verify in addition
    /// to the bundled fixtures.
    #[arg(long)]
    fixtures_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long = "class")]
    class_id: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    matrix: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FixturesArgs {
    /// Write the registry and matrix files into this directory.
    #[arg(long)]
    export: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(cli);
    if !outcome.message.is_empty() {
        eprintln!("{}", outcome.message);
    }
    if let Some(path) = &outcome.report_path {
        eprintln!("wrote {}", path.display());
    }
    ExitCode::from(outcome.exit_code)
}
