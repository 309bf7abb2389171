use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], input: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_multivalent"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut stdin = child.stdin.take().unwrap();
        if let Some(text) = input {
            stdin.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn phi_prints_multiplier() {
    let out = run(&["phi", "--p", "1", "--delta", "2", "--lambda", "1", "--k", "3"], None);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "9");
}

#[test]
fn transform_round_trips_json() {
    let input = r#"{"p":1,"n":1,"terms":[{"k":2,"re":0.5,"im":0.0}]}"#;
    let out = json(&run(&["transform", "--delta", "1"], Some(input)));
    assert_eq!(out["terms"][0]["k"], 2);
    assert_eq!(out["terms"][0]["re"], 1.0);
    let rec = json(&run(&["transform", "--delta", "1", "--recursive"], Some(input)));
    assert_eq!(rec, out);
}

#[test]
fn membership_verdict_shape() {
    let out = json(&run(&["membership"], Some(r#"{"p":1,"n":1,"terms":[{"k":2,"mag":0.5}]}"#)));
    assert_eq!(out["member"], true);
    assert_eq!(out["lhs"], 2.0);
    assert_eq!(out["rhs"], 2.0);
    assert_eq!(out["margin"], 0.0);
    let out = json(&run(&["membership"], Some(r#"{"p":1,"n":1,"terms":[{"k":2,"mag":0.6}]}"#)));
    assert_eq!(out["member"], false);
}

#[test]
fn bound_extremal_distortion() {
    let out = run(&["bound", "--k", "3"], None);
    assert!((stdout(&out).trim().parse::<f64>().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    let ext = json(&run(&["extremal", "--k", "2"], None));
    assert_eq!(ext["terms"][0]["mag"], 0.5);
    let d = json(&run(&["distortion", "--q", "0", "--r", "0.5"], None));
    assert!((d["lower"].as_f64().unwrap() - 0.375).abs() < 1e-15);
    assert!((d["upper"].as_f64().unwrap() - 0.625).abs() < 1e-15);
    let bad = run(&["distortion", "--q", "1", "--r", "0.5"], None);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scan_reports_sampled_pass() {
    let out = run(
        &["scan", "--radii", "0.5,0.9", "--angles", "32", "--seed", "3"],
        Some(r#"{"p":1,"n":1,"terms":[{"k":2,"mag":0.25}]}"#),
    );
    let rep = json(&out);
    assert_eq!(rep["pass"], true);
    assert_eq!(rep["sampled"], true);
    assert_eq!(rep["samples"], 64);
}

#[test]
fn neighborhood_modes() {
    let f = r#"{"p":1,"n":1,"terms":[{"k":2,"mag":0.1}]}"#;
    let rep = json(&run(&["neighborhood", "--delta", "0", "--eta", "0.4", "--samples", "20"], Some(f)));
    assert_eq!(rep["pass"], true);
    assert_eq!(rep["sampled"], false);
    let rep = json(&run(
        &["neighborhood", "--eta", "0.2", "--theorem", "41", "--a", "-0.5", "--b", "0.5"],
        Some(r#"{"p":1,"n":1,"terms":[]}"#),
    ));
    assert!(rep["witness"].is_object());
}

#[test]
fn partial_sums_reports_bounds_and_minima() {
    let rep = json(&run(&["partial-sums", "--m", "2", "--extremal"], None));
    assert_eq!(rep["pass"], true);
    assert!(rep["bounds"]["f_over_partial"].is_number());
    assert!(rep["observed_minima"]["partial_over_f"].is_number());
}

#[test]
fn closure_result() {
    let res = json(&run(&["closure", "--kind", "product", "--sigmas", "0,0"], None));
    assert!((res["new_sigma"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(res["vacuous"], false);
    let res = json(&run(&["closure", "--kind", "squares", "--sigmas", "0,0,0,0,0"], None));
    assert_eq!(res["vacuous"], true);
}

#[test]
fn fractional_modes() {
    let f = r#"{"p":1,"n":1,"terms":[{"k":2,"mag":0.25}]}"#;
    let g = json(&run(&["fractional", "--nu", "0.5", "--vartheta", "1", "--mode", "74"], Some(f)));
    assert_eq!(g["terms"].as_array().unwrap().len(), 2);
    assert_eq!(g["terms"][0]["e"], 0.5);
    let b = json(&run(&["fractional", "--nu", "0.5", "--vartheta", "1", "--mode", "bounds71", "--r", "0.5"], None));
    assert!(b["lower"].as_f64().unwrap() < b["upper"].as_f64().unwrap());
    let o = json(&run(&["fractional", "--nu", "0.5", "--mode", "oracle", "--r", "0.4"], Some(f)));
    assert!(o["difference"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_writes_reports_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("campaign.cfg");
    std::fs::write(&cfg, "# small run\nmembers = 5\nparam_sets = 2\n").unwrap();
    let json_path = dir.path().join("out.json");
    let csv_path = dir.path().join("out.csv");
    let out = run(
        &[
            "verify",
            "--theorems",
            "inclusion-delta,coefficient-sharpness",
            "--seed",
            "7",
            "--config",
            cfg.to_str().unwrap(),
            "--json",
            json_path.to_str().unwrap(),
            "--csv",
            csv_path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS (exact)"));
    let reports: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let ids: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["theorem_id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["coefficient-sharpness", "inclusion-delta"]);
    assert_eq!(reports[1]["samples"], 5);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("theorem_id,pass,samples,worst_margin,sampled\n"));
    assert_eq!(csv.lines().count(), 3);

    let failing = run(&["verify", "--theorems", "kernel-real-part", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(failing.status.code(), Some(1));
    let unknown = run(&["verify", "--theorems", "nope"], None);
    assert_eq!(unknown.status.code(), Some(2));
}
