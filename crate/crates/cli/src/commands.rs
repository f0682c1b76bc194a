use std::io::Write;
use std::path::{Path, PathBuf};

use normaloid::error::Error;
use normaloid::fixtures::{export_fixtures, fixture_registry, read_fixtures_from, Fixture};
use normaloid::generators::GENERATOR_NAME;
use normaloid::linalg::io::{format_f64, matrix_to_json, read_matrix};
use normaloid::pencil::pencil_scan;
use normaloid::{
    classify, generate, run_all, run_suite, ClassifyOptions, GeneratorClass, GeneratorSpec,
    PropertyResult, TheoremId, ToleranceConfig,
};
use serde::Serialize;

use crate::{ClassifyArgs, Cli, Command, FixturesArgs, GenerateArgs, ScanArgs, VerifyArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug)]
pub struct CommandOutcome {
    pub exit_code: u8,
    pub report_path: Option<PathBuf>,
    pub message: String,
}

impl CommandOutcome {
    fn ok(report_path: Option<PathBuf>) -> Self {
        Self {
            exit_code: EXIT_OK,
            report_path,
            message: String::new(),
        }
    }
}

impl From<Error> for CommandOutcome {
    fn from(e: Error) -> Self {
        let exit_code = match e {
            Error::ConvergenceFailure { .. } => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Self {
            exit_code,
            report_path: None,
            message: format!("error: {e}"),
        }
    }
}

type Outcome<T = CommandOutcome> = Result<T, CommandOutcome>;

pub fn run(cli: Cli) -> CommandOutcome {
    let cfg = match ToleranceConfig::profile(cli.tolerance.into()).with_overrides(std::env::vars()) {
        Ok(cfg) => cfg,
        Err(e) => return e.into(),
    };
    let result = match cli.command {
        Command::Classify(args) => cmd_classify(args, &cfg),
        Command::Verify(args) => cmd_verify(args, &cfg),
        Command::Generate(args) => cmd_generate(args),
        Command::PencilScan(args) => cmd_pencil_scan(args, &cfg),
        Command::Fixtures(args) => cmd_fixtures(args),
    };
    result.unwrap_or_else(|e| e)
}

/// Writes to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, text: &str) -> Outcome<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::from(e).into()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::from(e).into())
        }
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn cmd_classify(args: ClassifyArgs, cfg: &ToleranceConfig) -> Outcome {
    let t = read_matrix(&args.matrix)?;
    let opts = ClassifyOptions {
        p_list: args.p_list,
        r_list: args.r_list,
        k_list: args.k_list,
    };
    let report = classify(&t, &opts, cfg)?;
    emit(args.out.as_deref(), &to_json(&report))?;
    Ok(CommandOutcome::ok(args.out))
}

#[derive(Serialize)]
struct FixtureResult {
    name: String,
    source: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    suite: &'a str,
    trials: usize,
    seed: u64,
    generator: &'a str,
    tolerance: &'a ToleranceConfig,
    passed: bool,
    results: Vec<PropertyResult>,
    fixtures: Vec<FixtureResult>,
}

fn check_fixtures(
    fixtures: Vec<Fixture>,
    source: &str,
    cfg: &ToleranceConfig,
) -> Outcome<Vec<FixtureResult>> {
    fixtures
        .into_iter()
        .map(|f| {
            let (passed, detail) = match f.verify(cfg) {
                Ok(_) => (true, None),
                Err(e @ Error::FixtureMismatch { .. }) => (false, Some(e.to_string())),
                Err(e) => return Err(e.into()),
            };
            Ok(FixtureResult {
                name: f.name,
                source: source.to_string(),
                passed,
                detail,
            })
        })
        .collect()
}

fn cmd_verify(args: VerifyArgs, cfg: &ToleranceConfig) -> Outcome {
    let results = if args.suite == "all" {
        run_all(args.trials, args.seed, cfg)?
    } else {
        let id: TheoremId = args.suite.parse()?;
        vec![run_suite(id, args.trials, args.seed, cfg)?]
    };
    let mut fixtures = check_fixtures(fixture_registry(), "bundled", cfg)?;
    if let Some(dir) = &args.fixtures_dir {
        let loaded = read_fixtures_from(dir)?;
        fixtures.extend(check_fixtures(loaded, &dir.display().to_string(), cfg)?);
    }
    let passed = results.iter().all(PropertyResult::passed) && fixtures.iter().all(|f| f.passed);

    let mut summary = String::new();
    for r in &results {
        summary.push_str(&format!(
            "{:<22} {}  evaluated={} (contrapositive {}) skipped={} failures={}{}\n",
            r.theorem_id.to_string(),
            if r.passed() { "PASS" } else { "FAIL" },
            r.evaluated,
            r.contrapositive,
            r.skipped,
            r.failures,
            if r.tolerance_alarm { "  [tolerance alarm]" } else { "" },
        ));
    }
    for f in fixtures.iter().filter(|f| !f.passed) {
        summary.push_str(&format!(
            "fixture {} ({}) FAIL: {}\n",
            f.name,
            f.source,
            f.detail.as_deref().unwrap_or("")
        ));
    }

    let report = VerifyReport {
        suite: &args.suite,
        trials: args.trials,
        seed: args.seed,
        generator: GENERATOR_NAME,
        tolerance: cfg,
        passed,
        results,
        fixtures,
    };
    emit(args.out.as_deref(), &to_json(&report))?;
    Ok(CommandOutcome {
        exit_code: if passed { EXIT_OK } else { EXIT_FAILURE },
        report_path: args.out,
        message: summary.trim_end().to_string(),
    })
}

fn cmd_generate(args: GenerateArgs) -> Outcome {
    let class: GeneratorClass = args.class_id.parse()?;
    let spec = GeneratorSpec {
        rank: args.rank,
        spectrum_scale: args.scale,
        ..GeneratorSpec::new(class, args.n, args.seed)
    };
    let m = generate(&spec)?;
    emit(args.out.as_deref(), &matrix_to_json(&m))?;
    Ok(CommandOutcome::ok(args.out))
}

fn cmd_pencil_scan(args: ScanArgs, cfg: &ToleranceConfig) -> Outcome {
    let t = read_matrix(&args.matrix)?;
    let rows = pencil_scan(&t, args.p, args.r, args.points, cfg)?;
    let mut csv = String::from("lambda,min_eig\n");
    for (lambda, min_eig) in rows {
        csv.push_str(&format!("{},{}\n", format_f64(lambda), format_f64(min_eig)));
    }
    emit(args.out.as_deref(), &csv)?;
    Ok(CommandOutcome::ok(args.out))
}

fn cmd_fixtures(args: FixturesArgs) -> Outcome {
    if let Some(dir) = &args.export {
        export_fixtures(dir)?;
    }
    let mut listing = String::new();
    for f in fixture_registry() {
        listing.push_str(&format!("{}\t{}x{}\t{}\n", f.name, f.matrix.dim(), f.matrix.dim(), f.description));
    }
    emit(None, &listing)?;
    Ok(CommandOutcome::ok(args.export))
}
