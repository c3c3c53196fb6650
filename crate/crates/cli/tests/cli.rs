use std::path::Path;
use std::process::{Command, Output};

fn mgk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn goursat_suite_passes_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"command": "verify", "suites": ["goursat"]}"#,
    );
    let out = mgk(&["--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = report["records"].as_array().unwrap();
    assert!(records
        .iter()
        .any(|r| r["name"] == "goursat/alt5-z7-random-pairs" && r["status"] == "pass"));
    assert!(records
        .iter()
        .all(|r| r["anchor"].as_str().is_some_and(|a| !a.is_empty())));
    assert_eq!(report["summary"]["fail"], 0);
    assert_eq!(report["config"]["suites"][0], "goursat");
}

#[test]
fn malformed_json_exits_two_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"command": verify"#);
    let out = mgk(&["--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_fields_and_suites_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        r#"{"command": "verify", "colour": "blue"}"#,
        r#"{"command": "verify", "suites": ["nope"]}"#,
        r#"{"command": "verify", "caps": {"ball": 0}}"#,
        r#"{"command": "agreement", "agreement": {"pairs": [["Z/6", "Q8"]]}}"#,
    ] {
        let cfg = write(dir.path(), "c.json", body);
        assert_eq!(mgk(&["--config", &cfg]).status.code(), Some(2), "{body}");
    }
    assert_eq!(
        mgk(&["--config", "/nonexistent/config.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn reports_are_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"command": "verify", "suites": ["hall", "fp-recovery", "ore"]}"#,
    );
    let a = mgk(&["--config", &cfg, "--jobs", "3"]);
    let b = mgk(&["--config", &cfg]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let names: Vec<&str> = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort_by_key(|n| n.split('/').next().unwrap().to_string());
    assert_eq!(names, sorted);
}

#[test]
fn agreement_table_and_markdown_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"command": "agreement", "agreement": {"pairs": [["Z/6", "Z"], ["D[6]", "D[inf]"]], "rmax": 20}}"#,
    );
    let json_out = mgk(&["--config", &cfg]);
    assert_eq!(json_out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    assert_eq!(report["agreement"][0]["radius"], 2);
    assert_eq!(report["agreement"][1]["radius"], 5);
    let md = dir.path().join("r.md");
    let out = mgk(&[
        "--config",
        &cfg,
        "--format",
        "markdown",
        "--out",
        md.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(md).unwrap();
    assert!(text.contains("| Z/6 | Z | 2 |"));
}

#[test]
fn resource_cap_gives_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"command": "agreement", "agreement": {"pairs": [["Z^2", "Z^2"]], "rmax": 50}, "caps": {"ball": 100}}"#,
    );
    let out = mgk(&["--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["records"][0]["status"], "inconclusive");
}

#[test]
fn list_maps_every_suite_to_checks() {
    let out = mgk(&["--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for suite in [
        "goursat",
        "ore",
        "hall",
        "absorption",
        "encoding",
        "amalgam",
        "diagonal",
        "fp-recovery",
    ] {
        assert!(text.lines().any(|l| l == suite), "{suite} missing");
    }
}

#[test]
fn spectral_command_reports_a_gap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"command": "spectral", "spectral": {"blocks": [[1, 2]]}}"#,
    );
    let out = mgk(&["--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["spectral"][0]["gap"].as_f64().unwrap() > 0.0);
}
