use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use eisenlab_cli::{read_records, run_sweep, stats_table, verify_records, ResultRecord, SweepConfig};

fn eisenlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisenlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn invariants_at_337() {
    let o = eisenlab(&["invariants", "--N", "337", "--p", "7", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = ResultRecord::from_line(stdout(&o).trim()).unwrap();
    assert_eq!(r.merel.value, 227);
    assert_eq!(r.merel.pth_power, Some(false));
    assert_eq!(r.kind, eisenlab_cli::RecordKind::InvariantsOnly);
}

#[test]
fn invariants_at_11_and_181() {
    let o = eisenlab(&["invariants", "--N", "11", "--p", "5"]);
    assert!(stdout(&o).contains("ord_1(zeta)      1"));
    let o = eisenlab(&["invariants", "--N", "181", "--p", "5"]);
    assert!(stdout(&o).contains("ord_1(zeta)      3"));
}

#[test]
fn hecke_reports_and_massey_echo() {
    let o = eisenlab(&["hecke", "--N", "5651", "--p", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let r = ResultRecord::from_line(line.trim()).unwrap();
    assert_eq!(r.e, Some(4));
    let degrees: Vec<usize> = r.components.unwrap().iter().map(|c| c.degree).collect();
    assert_eq!(degrees, vec![1, 3]);
    let v: serde_json::Value = serde_json::from_str(&line).unwrap();
    assert_eq!(v["derived_massey"].as_array().unwrap().len(), 3);

    let o = eisenlab(&["hecke", "--N", "13", "--p", "5"]);
    assert!(stdout(&o).contains("rank e           0"));
    let o = eisenlab(&["hecke", "--N", "181", "--p", "5"]);
    let text = stdout(&o);
    assert!(text.contains("derived: <M>_D^2 vanishes mod p^"), "{text}");
    assert!(text.contains("derived: <M>_D^3 vanishes mod p^"));
}

#[test]
fn exit_codes() {
    assert_eq!(eisenlab(&["invariants", "--N", "12", "--p", "5"]).status.code(), Some(2));
    assert_eq!(eisenlab(&["invariants", "--N", "13", "--p", "5"]).status.code(), Some(2));
    assert_eq!(eisenlab(&["hecke", "--N", "181", "--p", "5", "--ell", "11"]).status.code(), Some(2));
    assert_eq!(eisenlab(&["stats"]).status.code(), Some(2));
    assert_eq!(eisenlab(&["stats", "--in", "/nonexistent/records.jsonl"]).status.code(), Some(3));
    assert_eq!(eisenlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_exit_code_on_tampered_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let p = path.to_str().unwrap();
    let o = eisenlab(&["sweep", "--p", "5", "--max-N", "200", "--out", p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(eisenlab(&["verify", "--in", p]).status.code(), Some(0));
    let mut records = read_records(&path).unwrap();
    let r = records.iter_mut().find(|r| r.e == Some(1)).unwrap();
    r.e = Some(2);
    eisenlab_cli::sweep::write_records(&path, &records).unwrap();
    assert_eq!(eisenlab(&["verify", "--in", p]).status.code(), Some(4));
}

#[test]
fn selftest_command() {
    let o = eisenlab(&["massey-selftest", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("seed 7"));
    assert!(text.contains("k=5:nonzero"));
}

fn sorted_lines(path: &Path) -> Vec<String> {
    let mut lines: Vec<String> = fs::read_to_string(path).unwrap().lines().map(String::from).collect();
    lines.sort();
    lines
}

#[test]
fn resume_matches_a_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = dir.path().join("fresh.jsonl");
    let resumed = dir.path().join("resumed.jsonl");
    let cfg = |out: &Path, max_n| SweepConfig { omit_timing: true, workers: Some(2), ..SweepConfig::new(7, max_n, out) };

    let s = run_sweep(&cfg(&fresh, 400), |_| {}).unwrap();
    assert_eq!(s.written, s.levels);

    run_sweep(&cfg(&resumed, 200), |_| {}).unwrap();
    // Simulate an interrupted write.
    let mut text = fs::read_to_string(&resumed).unwrap();
    text.push_str("{\"schema_version\":1,\"N\":2");
    fs::write(&resumed, text).unwrap();
    assert!(run_sweep(&cfg(&resumed, 400), |_| {}).is_err(), "must not overwrite without resume");
    let s = run_sweep(&SweepConfig { resume: true, ..cfg(&resumed, 400) }, |_| {}).unwrap();
    assert!(s.skipped > 0 && s.written > 0);
    assert_eq!(sorted_lines(&fresh), sorted_lines(&resumed));
}

#[test]
fn stats_fold_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let mut in_memory = Vec::new();
    run_sweep(&SweepConfig::new(11, 700, &path), |r| in_memory.push(r.clone())).unwrap();
    let from_file = read_records(&path).unwrap();
    assert_eq!(stats_table(&in_memory).unwrap(), stats_table(&from_file).unwrap());
    assert!(verify_records(&from_file).passed());
    let o = eisenlab(&["stats", "--in", path.to_str().unwrap(), "--json"]);
    let t: eisenlab_cli::StatsTable = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(t.n, from_file.len());
    assert_eq!(t.g[&1], 0.909);
}
