//! End-to-end checks of the experiment runner and the `wcsg` binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use wcsg::cli::{emit, run, ExperimentConfig, Format, Overrides, Report, Suite};

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn load(name: &str) -> ExperimentConfig {
    ExperimentConfig::load(&config_path(name)).unwrap()
}

fn wcsg(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_wcsg")).args(args).output().unwrap()
}

#[test]
fn reports_round_trip_through_json() {
    let report = run(&load("bound-table-hardy.json"), None).unwrap();
    let back = Report::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(back, report);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    emit(&report, Format::Json, &path).unwrap();
    let read = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(read, report);
}

#[test]
fn csv_has_one_row_per_time() {
    let cfg = load("bound-table-hardy.json");
    assert_eq!(cfg.sweep.t.len(), 3);
    let report = run(&cfg, None).unwrap();
    let mut buf = Vec::new();
    report.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("id,t,status,"));
    for line in &lines[1..] {
        assert!(line.contains(",pass,"), "{line}");
    }
}

#[test]
fn empty_report_has_header_only_csv() {
    let report = Report::new(Suite::BoundTable, load("bound-table-hardy.json"), Vec::new());
    let mut buf = Vec::new();
    report.write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "id,t,status\n");
    assert!(report.summary.all_pass);
    assert_eq!(report.summary.total, 0);
}

#[test]
fn runs_are_deterministic() {
    let cfg = load("semigroup-check-dilation.json");
    let a = run(&cfg, None).unwrap().to_json().unwrap();
    let b = run(&cfg, None).unwrap().to_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn overrides_are_echoed() {
    let cfg = Overrides {
        tol: Some(1e-7),
        grid: Some(48),
    }
    .apply(load("norm-table-hardy.json"))
    .unwrap();
    let report = run(&cfg, None).unwrap();
    assert_eq!(report.config.policy.tol, 1e-7);
    assert_eq!(report.config.policy.n_theta, 48);
    assert_eq!(report.config.sweep.grid.n_theta, 48);
    assert!(report.summary.all_pass);
}

#[test]
fn invalid_overrides_are_rejected() {
    let cfg = load("norm-table-hardy.json");
    assert!(Overrides { tol: Some(-1.0), grid: None }.apply(cfg.clone()).is_err());
    assert!(Overrides { tol: None, grid: Some(0) }.apply(cfg).is_err());
}

#[test]
fn command_line_suite_wins() {
    let report = run(&load("bound-table-hardy.json"), Some(Suite::SemigroupCheck)).unwrap();
    assert_eq!(report.meta.suite, Suite::SemigroupCheck);
    assert_eq!(report.config.suite, Some(Suite::SemigroupCheck));
}

#[test]
fn binary_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_path("norm-table-hardy.json");
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let json = dir.path().join(format!("r{i}.json"));
            let csv = dir.path().join(format!("r{i}.csv"));
            let out = wcsg(&[
                "norm-table",
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                json.to_str().unwrap(),
                "--csv",
                csv.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
            [std::fs::read(json).unwrap(), std::fs::read(csv).unwrap()].concat()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn exit_code_one_when_a_case_fails() {
    let cfg = config_path("continuity-probe-h-infinity.json");
    let out = wcsg(&["continuity-probe", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(!report.summary.all_pass);
}

#[test]
fn exit_code_two_on_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"space": {"kind": "hardy", "p": 0.5}, "flow": {"kind": "catalog", "name": "dilation"}}"#)
        .unwrap();
    let out = wcsg(&["norm-table", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let missing = dir.path().join("missing.json");
    let out = wcsg(&["norm-table", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_keys_are_rejected() {
    let text = r#"{"space": {"kind": "hardy", "p": 2}, "flow": {"kind": "catalog", "name": "dilation"}, "bogus": 1}"#;
    assert!(ExperimentConfig::from_json(text).is_err());
}
