use std::path::PathBuf;
use std::process::{Command, Output};

fn nonbasis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonbasis"))
        .args(args)
        .env_remove("NONBASIS_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

const GEOM: [&str; 10] = ["--h", "2", "--s", "0", "--t", "1", "--domain", "n0", "--gap", "geometric,2,1"];

fn with(cmd: &[&str], extra: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = cmd.iter().map(|s| s.to_string()).collect();
    v.extend(GEOM.iter().map(|s| s.to_string()));
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run(args: &[String]) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    nonbasis(&refs)
}

#[test]
fn gapped_n0_large_window_passes() {
    let out = run(&with(&["verify", "thm4"], &["--window", "0:100000"]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["catalog"]["exceptional"], serde_json::json!([4, 6, 10]));
    let shifted: Vec<i64> = (0..16).map(|j| 2 * (1i64 << j) + 1).collect();
    assert_eq!(json["catalog"]["shifted_y"], serde_json::json!(shifted));
}

#[test]
fn gcd_violation_exits_2() {
    let out = nonbasis(&["construct", "--h", "2", "--s", "1", "--t", "3", "--domain", "n0", "--gap", "geometric,2,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gcd"));
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &["construct", "--h", "1", "--s", "0", "--t", "1", "--domain", "z"][..],
        &["construct", "--h", "2", "--s", "-1", "--t", "1", "--domain", "n0"],
        &["construct", "--h", "2", "--s", "0", "--t", "1", "--domain", "q"],
        &["catalog", "--h", "2", "--s", "0", "--t", "1", "--domain", "z", "--window", "5:1"],
        &["verify", "thm3", "--h", "2", "--s", "0", "--t", "1", "--domain", "z"],
        &["verify", "thm1", "--h", "2", "--s", "0", "--t", "1", "--gap", "factorial"],
        &["verify", "thm4", "--h", "2", "--s", "0", "--t", "1"],
        &["sumset", "--spec", "union(", "--order", "2", "--window", "0:10"],
        &["classify", "--h", "2", "--s", "0", "--t", "1", "--domain", "n0", "--n", "-3"],
    ] {
        let out = nonbasis(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn classify_five() {
    let out = run(&with(&["classify"], &["--n", "5"]));
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["checks"][0]["details"], "OutShiftedY(2)");
    assert_eq!(json["checks"][1]["status"], "pass");
}

#[test]
fn tiny_budget_reports_unknown() {
    let args = with(&["catalog"], &["--window", "0:60"]);
    let out = Command::new(env!("CARGO_BIN_EXE_nonbasis")).args(&args).env("NONBASIS_BUDGET", "0").output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let bad = Command::new(env!("CARGO_BIN_EXE_nonbasis")).args(&args).env("NONBASIS_BUDGET", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn catalog_golden() {
    let out = run(&with(&["catalog"], &["--window", "0:40"]));
    assert_eq!(out.status.code(), Some(0));
    assert_golden("catalog_geom2_n0.json", &stdout(&out));
}

#[test]
fn catalog_text_golden() {
    let out = run(&with(&["catalog"], &["--window", "0:40", "--format", "text"]));
    assert_eq!(out.status.code(), Some(0));
    assert_golden("catalog_geom2_n0.txt", &stdout(&out));
}

#[test]
fn gapped_z_golden() {
    let out = nonbasis(&["verify", "thm2", "--h", "3", "--s", "2", "--t", "0", "--gap", "triangular", "--window", "-200:200"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_golden("gapped_triangular_z.json", &stdout(&out));
}

#[test]
fn gap_basis_golden() {
    let out = nonbasis(&["verify", "lemma", "--h", "2", "--gap", "geometric,3,1", "--window", "0:200"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_golden("lemma_geom3_n0.json", &stdout(&out));
}

#[test]
fn reports_are_deterministic() {
    let args = with(&["verify", "thm4"], &["--window", "0:3000"]);
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn construct_spec_round_trips() {
    let out = run(&with(&["construct"], &["--window", "0:30"]));
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let spec = nonbasis::parse_spec(json["family"]["spec"].as_str().unwrap()).unwrap();
    let members = nonbasis::materialize(&spec, nonbasis::Window::new(0, 30).unwrap()).unwrap().enumerate();
    assert_eq!(members, vec![0, 1, 7, 11, 13, 15, 19, 21, 23, 25, 27, 29]);
    assert_eq!(json["checks"][1]["details"], "0, 1, 7, 11, 13, 15, 19, 21, 23, 25, 27, 29");
}

#[test]
fn sumset_from_spec() {
    let out = nonbasis(&["sumset", "--spec", "union(single:0, mod(3,1))", "--order", "2", "--domain", "z", "--window", "-6:6"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let complement = json["checks"][2]["details"].as_str().unwrap().to_string();
    assert_eq!(complement, "-6, -3, 3, 6");
}

#[test]
fn output_file_for_full_z_family() {
    let dir = std::env::temp_dir().join(format!("nonbasis-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = nonbasis(&[
        "verify", "thm1", "--h", "3", "--s", "0", "--t", "1", "--window", "-200:200", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(json["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    std::fs::remove_dir_all(&dir).unwrap();
}
