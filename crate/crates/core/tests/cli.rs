use std::fs;
use std::path::Path;
use std::process::Command;

use gaprecover::cli::run;
use gaprecover::io::read_sequence_csv;
use gaprecover::sequence::GapSpec;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn gaprecover(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gaprecover").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn recover_deg_prints_the_closed_form_value() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "seq.csv", "t,re,im\n1,1,0\n");
    let out = gaprecover(&["recover-deg", "--in", &seq, "--gap", "0", "--m", "0", "--omega0", "pi"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.trim(), "0 1+0i");
}

#[test]
fn recover_bl_on_an_empty_sequence_is_zero() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "empty.csv", "t,re,im\n");
    let out = gaprecover(&["recover-bl", "--in", &seq, "--gap", "0", "--m", "0", "--cutoff", "0.1pi"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.trim(), "0 0+0i");
}

#[test]
fn experiment_writes_one_row_per_method_and_trial() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "fig1.json",
        r#"{
            "generator": "bl",
            "cutoff_true": "0.1pi",
            "methods": [
                {"kind": "wx1", "cutoff": "0.1pi"},
                {"kind": "wx1", "cutoff": "0.05pi"},
                {"kind": "wx2", "omega0": "pi"}
            ],
            "n_obs": 100,
            "trials": 7
        }"#,
    );
    let out = gaprecover(&["experiment", "--config", &config]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "trial,method,param,err_abs,bound,holds");
    assert_eq!(lines.len(), 1 + 3 * 7);

    let summary = dir.path().join("summary.json");
    let out = gaprecover(&["experiment", "--config", &config, "--sequential", "--summary", path_str(&summary), "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let written: serde_json::Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    let printed: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(written, printed);
    assert_eq!(printed["methods"].as_array().unwrap().len(), 3);
}

#[test]
fn generated_degenerate_paths_round_trip_through_recovery() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("deg.csv");
    let out = gaprecover(&[
        "generate", "--kind", "degenerate", "--m", "2", "--omega0", "pi/2", "--q", "40", "--seed", "7", "--out",
        path_str(&path),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let truth = read_sequence_csv(fs::File::open(&path).unwrap()).unwrap().gap_values(&GapSpec::new(0, 2));

    let recovered = dir.path().join("gap.csv");
    let out = gaprecover(&[
        "recover-deg", "--in", path_str(&path), "--m", "2", "--omega0", "pi/2", "--format", "csv", "--out",
        path_str(&recovered),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let got = read_sequence_csv(fs::File::open(&recovered).unwrap()).unwrap();
    for (p, want) in truth.iter().enumerate() {
        assert!((got.get(p as i64) - want).norm() <= 1e-10);
    }
}

#[test]
fn generated_band_limited_paths_round_trip_through_recovery() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bl.csv");
    let out = gaprecover(&["generate", "--kind", "bl", "--cutoff", "0.1pi", "--q", "4000", "--out", path_str(&path)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let truth = read_sequence_csv(fs::File::open(&path).unwrap()).unwrap().get(0);
    let out = gaprecover(&["recover-bl", "--in", path_str(&path), "--cutoff", "0.1pi", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let json: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let re = json["recovered"][0][0].as_f64().unwrap();
    assert!((re - truth.re).abs() <= 1e-2, "{re} vs {}", truth.re);
}

#[test]
fn bounds_reports_norms_and_checks() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "seq.csv", "t,re,im\n-3,1,0\n-1,0.5,0.5\n2,-1,0\n5,0.25,0\n");
    let out = gaprecover(&["bounds", "--scheme", "bl", "--cutoff", "0.3pi", "--m", "1", "--in", &seq]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let rows: Vec<&str> = out.stdout.lines().skip(1).collect();
    assert_eq!(rows.iter().filter(|r| r.starts_with("norm,")).count(), 3);
    let checks: Vec<&&str> = rows.iter().filter(|r| r.starts_with("check,")).collect();
    assert_eq!(checks.len(), 6);
    assert!(checks.iter().all(|r| r.ends_with(",true")));

    let out = gaprecover(&["bounds", "--scheme", "bl", "--m", "1"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--cutoff"));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "seq.csv", "t,re,im\n1,1,0\n");
    for args in [
        vec!["recover-bl", "--in", seq.as_str(), "--cutoff", "pi"],
        vec!["recover-bl", "--in", seq.as_str(), "--cutoff", "banana"],
        vec!["recover-deg", "--in", seq.as_str(), "--omega0", "-pi"],
        vec!["recover-deg", "--in", seq.as_str(), "--gap", "2", "--m", "1"],
        vec!["recover-deg", "--in", "/definitely/not/here.csv"],
        vec!["generate", "--q", "0"],
        vec!["no-such-command"],
    ] {
        let out = gaprecover(&args);
        assert_eq!(out.code, 1, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_csv_names_the_line() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "bad.csv", "t,re,im\n0,1,0\n1,oops,0\n");
    let out = gaprecover(&["recover-deg", "--in", &seq]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
}

#[test]
fn order_cap_is_enforced_and_overridable() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "seq.csv", "t,re,im\n30,1,0\n");
    let out = gaprecover(&["recover-deg", "--in", &seq, "--m", "17"]);
    assert_eq!(out.code, 1);
    let out = gaprecover(&["recover-deg", "--in", &seq, "--m", "17", "--max-order", "17"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().count(), 18);
}

#[test]
fn numeric_failures_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "seq.csv", "t,re,im\n1,1,0\n");
    let out = gaprecover(&["recover-deg", "--in", &seq, "--m", "60", "--max-order", "60"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("singular"), "{}", out.stderr);
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(gaprecover(&["--help"]).code, 0);
    assert_eq!(gaprecover(&["--version"]).code, 0);
}

#[test]
fn binary_maps_errors_to_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gaprecover");
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "seq.csv", "t,re,im\n1,1,0\n");
    let ok = Command::new(bin).args(["recover-deg", "--in", &seq]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "0 1+0i");
    let bad = Command::new(bin).args(["recover-bl", "--in", &seq]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
}
