use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pdaforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdaforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name)
}

#[test]
fn construct_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t2.pda");
    let o = pdaforge(&[
        "construct", "--q", "2", "--m", "4", "--omega", "1", "--partition", "improved", "--coloring", "complement",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), fs::read_to_string(golden("table2.pda")).unwrap());

    let o = pdaforge(&["construct", "--q", "2", "--m", "3", "--omega", "2"]);
    assert_eq!(stdout(&o), fs::read_to_string(golden("example2.pda")).unwrap());
}

#[test]
fn verify_reports_and_exits() {
    let o = pdaforge(&["verify", golden("example2.pda").to_str().unwrap(), "--useless"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("C1 ok"));
    assert!(text.contains("C2 ok (Z=5)"));
    assert!(text.contains("useless stars per column: 1"));
    assert!(text.contains("(111,000)"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pda");
    let text = fs::read_to_string(golden("example2.pda")).unwrap();
    fs::write(&bad, text.replacen("000 | * * * 110:0", "000 | * 110:0 * 110:0", 1)).unwrap();
    let o = pdaforge(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pdaforge(&["construct", "--q", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(pdaforge(&["table", "VI"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let o = pdaforge(&["construct", "--q", "2", "--m", "3", "--omega", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = pdaforge(&["--cell-cap", "10", "construct", "--q", "2", "--m", "3", "--omega", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn table_iv_csv() {
    let o = pdaforge(&["table", "IV", "--csv"]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["scheme", "params", "K", "F", "memory_fraction", "rate", "flags"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 18);
    let row = rows.iter().find(|r| &r[1] == "(16,6,2)").unwrap();
    assert_eq!((&row[3], &row[5], &row[6]), ("14893", "550.6071", ""));
    assert!(rows.iter().filter(|r| &r[0] == "CK").all(|r| r[6].starts_with("cited:")));
}

#[test]
fn analyze_json_schema() {
    let o = pdaforge(&["analyze", golden("table2.pda").to_str().unwrap(), "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["K"], 16);
    assert_eq!(v["Z"], 12);
    assert_eq!(v["S"], 16);
    assert_eq!(v["Zprime"], 6);
    assert_eq!(v["memory_fraction"], "3/4");
    assert_eq!(v["rate"], "1");
    assert_eq!(v["trimmed"]["F"], 10);
    assert_eq!(v["trimmed"]["memory_fraction"], "3/5");
}

#[test]
fn simulate_with_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let o = pdaforge(&[
        "simulate", golden("example2.pda").to_str().unwrap(), "--seed", "3", "--rounds", "20",
        "--transcript", t.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["decoded_ok"], true);
    assert_eq!(report["demands_run"], 20);
    assert_eq!(report["measured_R"], "3/4");
    assert_eq!(report["measured_M_over_N"], "5/8");
    let transcript: Value = serde_json::from_str(&fs::read_to_string(&t).unwrap()).unwrap();
    let signals = transcript.as_array().unwrap();
    assert_eq!(signals.len(), 6);
    assert_eq!(signals[0]["byte_len"], 64);
    assert_eq!(signals[0]["label"], "110:0");

    let again = pdaforge(&["simulate", golden("example2.pda").to_str().unwrap(), "--seed", "3", "--rounds", "20"]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn compare_json() {
    let o = pdaforge(&["compare", "--m", "4", "--omega", "2", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["K"], 16);
    assert_eq!(v["F1"], "11");
    assert!(v["balanced"].is_object());
    assert!(v["log10_F_ratio"].as_f64().unwrap() < 0.0);
}
