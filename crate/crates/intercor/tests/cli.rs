use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use intercor::output::{read_csv, CSV_COLUMNS};

fn intercor(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intercor"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: [&str; 4] = ["--trials", "2000", "--distances", "0.5:0.7:2"];

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.csv", "b.csv"] {
        let mut args = vec!["run", "figure2", "--seed", "42", "--out", out];
        args.extend(SMALL);
        let o = intercor(&args, dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    // The config line carries the output path; compare everything after it.
    let body = |v: &[u8]| {
        String::from_utf8_lossy(v)
            .split_once('\n')
            .unwrap()
            .1
            .to_string()
    };
    assert_eq!(body(&a), body(&b));
    assert!(dir.path().join("a.json").exists());
}

#[test]
fn csv_layout_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["run", "figure2", "--out", "f.csv"];
    args.extend(SMALL);
    assert!(intercor(&args, dir.path()).status.success());
    let path = dir.path().join("f.csv");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let (cfg, rows) = read_csv(&path).unwrap();
    assert_eq!(cfg.trials, 2000);
    assert_eq!(rows.len(), cfg.curves.len() * 2);
    assert!(rows.iter().all(|r| r.analytic_coverage.is_some()));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), rows.len());
    assert!(json["conventions"]["correlation_entries"].is_string());
}

#[test]
fn validate_reports_every_problem() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"kind":"figure2","rho_s":1.2,"trials":10}"#,
    )
    .unwrap();
    let o = intercor(&["validate", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(
        text.contains("rho_s = 1.2: correlation out of range [0, 1]"),
        "{text}"
    );
    assert!(text.contains("trials = 10: below minimum 10³"), "{text}");

    fs::write(dir.path().join("good.json"), r#"{"kind":"figure2"}"#).unwrap();
    let o = intercor(&["validate", "good.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "ok");
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("broken.json"),
        "{\"kind\":\"figure2\",\n\"m\": oops}",
    )
    .unwrap();
    let o = intercor(&["validate", "broken.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    fs::write(
        dir.path().join("extra.json"),
        r#"{"kind":"figure2","bogus":1}"#,
    )
    .unwrap();
    assert_eq!(
        intercor(&["validate", "extra.json"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_flags_exit_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = intercor(
        &["run", "custom", "--alpha", "1.5", "--out", "x.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn theorem_check_passes_for_small_m() {
    let dir = tempfile::tempdir().unwrap();
    let o = intercor(
        &[
            "run",
            "theorem-check",
            "--m",
            "0.5",
            "--rho",
            "0.6",
            "--trials",
            "100000",
            "--out",
            "t.csv",
        ],
        dir.path(),
    );
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("PASS convex_order"), "{text}");
    assert!(!text.contains("FAIL"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(json["pass"], true);
}

#[test]
fn layout_lists_nineteen_sites() {
    let dir = tempfile::tempdir().unwrap();
    let o = intercor(&["layout", "--distance", "0.7"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,x,y,distance,role");
    assert_eq!(lines.len(), 20);
    assert!(lines[1].ends_with(",serving"));
    assert_eq!(
        lines
            .iter()
            .filter(|l| l.ends_with(",closest_interferer"))
            .count(),
        1
    );
}
