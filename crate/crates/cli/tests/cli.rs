use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_normaloid"));
    // keep ambient overrides out of the goldens
    for (key, _) in std::env::vars() {
        if key.starts_with("NORMALOID_") {
            cmd.env_remove(key);
        }
    }
    cmd
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_matches_golden() {
    let o = run(&["classify", path(&fixture("ex_normaloid.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("ex_normaloid_classify.json"));
}

#[test]
fn pencil_scan_matches_golden() {
    let f = fixture("ex_normaloid.json");
    let args = ["pencil-scan", path(&f), "--p", "1", "--r", "1", "--points", "50"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv, golden("ex_normaloid_scan_p1_r1_50.csv"));
    assert!(csv.lines().skip(1).any(|l| l.split(',').nth(1).unwrap().starts_with('-')));
}

#[test]
fn pencil_scan_of_zero_and_normal_matrices_is_nonnegative() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, "{\"n\": 2, \"data\": [[0,0],[0,0],[0,0],[0,0]]}").unwrap();
    let diag = dir.path().join("diag.json");
    std::fs::write(&diag, "{\"n\": 2, \"data\": [[1,0],[0,0],[0,0],[2,0]]}").unwrap();

    let o = run(&["pencil-scan", path(&zero), "--p", "1", "--r", "1", "--points", "20"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines().skip(1) {
        let (l, m) = line.split_once(',').unwrap();
        let (l, m): (f64, f64) = (l.parse().unwrap(), m.parse().unwrap());
        // p·λ^{p+r} with p = r = 1
        assert!((m - l * l).abs() <= 1e-14 * l * l.max(1.0), "{line}");
    }
    let o = run(&["pencil-scan", path(&diag), "--points", "40"]);
    for line in stdout(&o).lines().skip(1) {
        let m: f64 = line.split_once(',').unwrap().1.parse().unwrap();
        assert!(m >= -1e-9, "{line}");
    }
}

#[test]
fn classify_identity_and_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let id = dir.path().join("id.json");
    std::fs::write(&id, "{\"n\": 2, \"data\": [[1,0],[0,0],[0,0],[1,0]]}").unwrap();
    let o = run(&["classify", path(&id)]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["verdicts"].as_array().unwrap().iter().all(|v| v["member"] == true));

    let truncated = dir.path().join("trunc.json");
    let text = std::fs::read_to_string(fixture("ex_normaloid.json")).unwrap();
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert_eq!(run(&["classify", path(&truncated)]).status.code(), Some(2));
    assert_eq!(run(&["classify", path(&dir.path().join("missing.json"))]).status.code(), Some(2));
    let nan = dir.path().join("nan.json");
    std::fs::write(&nan, "{\"n\": 1, \"data\": [[1e999,0]]}").unwrap();
    assert_eq!(run(&["classify", path(&nan)]).status.code(), Some(2));
}

#[test]
fn classify_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["classify", path(&fixture("ex_normaloid.json")), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap(), golden("ex_normaloid_classify.json"));
}

#[test]
fn generate_round_trips_through_classify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let args = ["generate", "--class", "quasinormal-partial-isometry", "--n", "4", "--rank", "2", "--seed", "7", "--out", path(&out)];
    assert_eq!(run(&args).status.code(), Some(0));
    let o = run(&["classify", path(&out)]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let member = |id: &str| {
        report["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .find(|v| v["class_id"] == id)
            .unwrap()["member"]
            .as_bool()
            .unwrap()
    };
    assert!(member("quasinormal"));
    assert!(member("partial_isometry"));

    let o = run(&["generate", "--class", "normal", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"n\": 1"));
    assert_eq!(run(&["generate", "--class", "normal", "--n", "4", "--rank", "5"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "--class", "bogus", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "--class", "normal", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--suite", "BOGUS"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));

    let o = run(&["verify", "--suite", "ASCENT_ONE", "--trials", "10", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let results: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(results["passed"], true);
    assert_eq!(results["results"][0]["theorem_id"], "ASCENT_ONE");
}

#[test]
fn tampered_fixture_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = dir.path().join("fixtures");
    assert_eq!(run(&["fixtures", "--export", path(&fixtures)]).status.code(), Some(0));
    let args = ["verify", "--suite", "POLAR_Q", "--trials", "2", "--fixtures-dir", path(&fixtures)];
    assert_eq!(run(&args).status.code(), Some(0));

    let registry = fixtures.join("registry.json");
    let text = std::fs::read_to_string(&registry).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["fixtures"][0]["expected"]["normal"] = serde_json::Value::Bool(true);
    std::fs::write(&registry, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    let results: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(results["passed"], false);

    std::fs::write(&registry, "{").unwrap();
    assert_eq!(run(&args).status.code(), Some(2));
}

#[test]
fn tolerance_profile_and_env_overrides() {
    let f = fixture("ex_normaloid.json");
    let strict = run(&["--tolerance", "strict", "classify", path(&f)]);
    assert_eq!(strict.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&strict)).unwrap();
    assert_eq!(report["verdicts"][0]["threshold"], 1e-12);

    let o = bin().args(["classify", path(&f)]).env("NORMALOID_EQ_RTOL", "1e-6").output().unwrap();
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdicts"][0]["threshold"], 1e-6);

    let o = bin().args(["classify", path(&f)]).env("NORMALOID_EQ_RTOL", "abc").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["--tolerance", "sloppy", "classify", path(&f)]).status.code(), Some(2));
}

#[test]
fn fixtures_lists_the_registry() {
    let o = run(&["fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    let listing = stdout(&o);
    assert!(listing.lines().count() >= 7);
    assert!(listing.starts_with("ex_normaloid\t3x3\t"));
}
