mod common;

use common::run_cli;
use serde_json::Value;

#[test]
fn verify_json_report_round_trips() {
    let (code, out, _) = run_cli(&["verify", "--all", "--k-max", "6", "--n-max", "6", "--workers", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["version"], 1);
    assert!(v["timestamp"].is_string());
    assert_eq!(v["config"]["ids"][0], "all");
    let results = v["results"].as_array().unwrap();
    assert!(results.iter().all(|r| r["status"] == "pass" && r["elapsed_ms"].is_number()));
    assert!(results.iter().any(|r| r["paper_ref"] == "Eq. (G1)"));
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["summary"]["identities"].as_array().unwrap().len() >= 30);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

#[test]
fn no_timestamp_runs_are_byte_identical() {
    let args = ["verify", "--id", "THM1.ii", "--id", "R-G1-LUC", "--k-max", "8", "--no-timestamp"];
    let (c1, a, _) = run_cli(&args);
    let (c2, b, _) = run_cli(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert!(v.get("timestamp").is_none());
    assert!(v["results"][0]["elapsed_ms"].is_null());

    let mc = ["mc-check", "--case", "normal", "--rho", "0.3", "--samples", "2e4", "--no-timestamp"];
    assert_eq!(run_cli(&mc).1, run_cli(&mc).1);
}

#[test]
fn negative_m_rows_are_flagged_empirical() {
    let (code, out, _) = run_cli(&["verify", "--id", "THM1.iii", "--m-range", "-5..10", "--n-max", "8"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    for r in v["results"].as_array().unwrap() {
        let m = r["params"]["m"].as_i64().unwrap();
        assert_eq!(r["empirical"].as_bool().unwrap(), m < 0);
    }
}

#[test]
fn exit_codes() {
    let (code, _, err) = run_cli(&["verify", "--id", "NOPE"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown identity"));
    assert_eq!(run_cli(&["verify", "--n-max", "81"]).0, 2);
    assert_eq!(run_cli(&["verify", "--m-range", "3..1"]).0, 2);
    assert_eq!(run_cli(&["verify", "--m-range", "nonsense"]).0, 2);
    assert_eq!(run_cli(&["bench", "--k-max", "-1"]).0, 2);
    assert_eq!(run_cli(&["mc-check", "--samples", "10"]).0, 2);
    assert_eq!(run_cli(&["list", "--format", "yaml"]).0, 2);
    assert_eq!(run_cli(&[]).0, 2);
    assert_eq!(run_cli(&["help"]).0, 0);
    let (code, _, err) = run_cli(&["mc-check", "--case", "gamma", "--rho", "-0.3"]);
    assert_eq!(code, 2);
    assert!(err.contains("gamma requires rho in [0,1)"));
}

#[test]
fn mc_check_small_sample_warns_but_still_gates() {
    let (code, out, err) = run_cli(&["mc-check", "--samples", "1e3", "--case", "normal", "--rho", "0"]);
    assert_eq!(code, 0, "{out}");
    assert!(err.contains("standard errors are wide"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["z_gate"], 5.0);
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
}

#[test]
fn list_formats() {
    let (_, md, _) = run_cli(&["list"]);
    assert!(md.lines().count() >= 32);
    let (_, one, _) = run_cli(&["list", "--id", "COR-PHI-LUC", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(one.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "COR-PHI-LUC");
    let (_, js, _) = run_cli(&["list", "--format", "json"]);
    let v: Value = serde_json::from_str(&js).unwrap();
    let first = &v.as_array().unwrap()[0];
    assert_eq!(first["id"], "THM1.i");
    assert_eq!(first["ring"], "Q[ρ]");
}

#[test]
fn csv_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = run_cli(&["verify", "--id", "R-EX1-B1", "--n-max", "5", "--format", "csv", "--output", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rdr.headers().unwrap().get(0), Some("id"));
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert!(!rows.is_empty() && rows.iter().all(|r| &r[2] == "pass"));
}

#[test]
fn markdown_report_and_bench() {
    let (code, out, _) = run_cli(&["verify", "--id", "THM1.i", "--k-max", "4", "--format", "markdown"]);
    assert_eq!(code, 0);
    assert!(out.contains("| THM1.i | 5 | 5 | 0 | 0 | Eq. (G1) |"));
    let (code, out, _) = run_cli(&["bench", "--id", "THM1.i", "--k-max", "20", "--workers", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let sizes: Vec<i64> = v["results"].as_array().unwrap().iter().map(|r| r["size"].as_i64().unwrap()).collect();
    assert_eq!(sizes, vec![5, 10, 20]);
    assert!(v["summary"]["speedup"].as_f64().unwrap() > 0.0);
}

#[test]
fn binary_exit_codes() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_idforge");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = code(&["verify", "--id", "THM1.i", "--k-max", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = code(&["verify", "--id", "THM1.i", "--k-max", "3", "--perturb-rhs"]);
    assert_eq!(bad.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["status"], "fail");
        assert!(r["witness"].as_str().unwrap().starts_with("coefficient of"));
    }
    let usage = code(&["verify", "--id", "NOPE"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("unknown identity"));
    let env = Command::new(bin)
        .args(["verify", "--id", "THM1.i", "--k-max", "2"])
        .env("IDFORGE_WORKERS", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["config"]["workers"], 3);
}
