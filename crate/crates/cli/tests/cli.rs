use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsep")).args(args).output().expect("spawn qsep")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report on stdout")
}

#[test]
fn balls_for_qutrits() {
    let o = qsep(&["run", "balls", "--body", "D", "--m", "3"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["schemaVersion"], 1);
    assert!((r["result"]["ratio"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((r["result"]["inradius"].as_f64().unwrap() - 1.0 / 6f64.sqrt()).abs() < 1e-12);
    assert!((r["result"]["outradius"].as_f64().unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
}

#[test]
fn vidal_tarrach_passes() {
    let o = qsep(&["run", "witness", "--check", "vidal-tarrach", "--d", "2", "--samples", "10000", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["report"]["separable"], 10000);
}

#[test]
fn deficient_random_net_is_falsified() {
    let o = qsep(&["run", "random-net", "--d", "2", "--N", "3", "--eps", "0.75", "--seed", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["status"], "falsified");
}

#[test]
fn empty_report_set() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsep(&["report", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("file"));
    assert!(text.contains("over 0 report(s)"));
}

#[test]
fn usage_errors() {
    assert!(code(&qsep(&["run", "net", "--n", "3", "--eps", "0.5"])) >= 64, "missing seed");
    assert!(code(&qsep(&["run", "balls", "--body", "D", "--m", "3", "--bogus"])) >= 64);
    assert!(code(&qsep(&["run", "nothing"])) >= 64);
    assert!(code(&qsep(&["run", "witness", "--check", "gurvits-barnum", "--d", "3", "--seed", "1"])) >= 64);
    assert_eq!(code(&qsep(&["--help"])), 0);
}

#[test]
fn unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    let o = qsep(&["run", "balls", "--body", "D", "--m", "2", "--out", out.to_str().unwrap()]);
    assert!(code(&o) >= 64);
}

const SMALL_APPROX: [&str; 12] =
    ["run", "approx-d", "--m", "2", "--delta", "0.05", "--directions", "40", "--restarts", "4", "--test-states", "40"];

#[test]
fn require_certified_never_exits_zero_on_not_falsified() {
    let plain = qsep(&[&SMALL_APPROX[..], &["--seed", "2"]].concat());
    assert_eq!(code(&plain), 0);
    assert_eq!(json(&plain)["status"], "not-falsified");
    let strict = qsep(&[&SMALL_APPROX[..], &["--seed", "2", "--require-certified"]].concat());
    assert_eq!(code(&strict), 2);
}

#[test]
fn config_file_with_flags_winning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# defaults\nseed = 11\nsamples=500\nrequire-certified=false\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = qsep(&["run", "witness", "--check", "gurvits-barnum", "--config", c]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["invocation"]["seed"], 11);
    assert_eq!(r["result"]["samples"], 500);
    let o = qsep(&["run", "witness", "--check", "gurvits-barnum", "--config", c, "--samples", "300", "--seed=12"]);
    let r = json(&o);
    assert_eq!(r["invocation"]["seed"], 12);
    assert_eq!(r["result"]["samples"], 300);
}

fn run_to(dir: &Path, threads: &str) -> Vec<u8> {
    let args = ["run", "cap-stats", "--d", "3", "--theta", "0.2", "--samples", "20000", "--seed", "9", "--threads", threads];
    let o = qsep(&[&args[..], &["--out", dir.to_str().unwrap()]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.join("cap-stats.meta.json").exists());
    fs::read(dir.join("cap-stats.json")).unwrap()
}

#[test]
fn reports_are_byte_identical_across_threads_and_replay() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run_to(a.path(), "1"), run_to(b.path(), "3"));
    let report = a.path().join("cap-stats.json");
    assert_eq!(code(&qsep(&["replay", report.to_str().unwrap(), "--threads", "2"])), 0);
    let mut doctored: Value = serde_json::from_slice(&fs::read(&report).unwrap()).unwrap();
    doctored["result"]["alpha"]["alphaHat"] = 0.5.into();
    fs::write(&report, serde_json::to_string_pretty(&doctored).unwrap() + "\n").unwrap();
    assert_eq!(code(&qsep(&["replay", report.to_str().unwrap()])), 1);
}

#[test]
fn flm_table_and_roll_up() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = qsep(&["run", "flm", "--n-min", "4", "--n-max", "12", "--out", d, "--format", "both"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("flm.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert!(header.contains(&"ratio"));
    assert_eq!(csv.lines().count(), 1 + 9);

    let o = qsep(&["run", "random-net", "--d", "2", "--N", "3", "--eps", "0.75", "--seed", "1", "--out", d]);
    assert_eq!(code(&o), 1);
    let o = qsep(&["report", d, "--out", d, "--format", "csv"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("falsified") && text.contains("flm"));
    assert!(fs::read_to_string(dir.path().join("summary.csv")).unwrap().lines().count() == 3);
}

#[test]
fn missing_report_file() {
    assert!(code(&qsep(&["report", "/nonexistent/report.json"])) >= 64);
}
