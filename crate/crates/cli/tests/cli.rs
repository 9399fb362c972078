//! Binary-level behavior: exit codes, file validation, report shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nilsoliton")
}

fn work_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "nilsoliton-cli-{}-{}",
        std::process::id(),
        std::thread::current().name().unwrap_or("t").replace("::", "-")
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn nilsoliton")
}

#[test]
fn classify_exit_codes_and_output() {
    let out = run(&["classify", "--p", "4", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exceptional"], serde_json::Value::Bool(false));

    let out = run(&["classify", "--p", "10", "--q", "5"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exceptional"], serde_json::Value::Bool(true));
    assert!(v["reason"].as_str().unwrap().contains("q(q-1)/2"));

    // out of range is an input error
    let out = run(&["classify", "--p", "11", "--q", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_analyze_roundtrip() {
    let dir = work_dir();
    let tuple = dir.join("t.json");
    let out = run(&["sample", "--p", "2", "--q", "4", "--seed", "5", "--out", tuple.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let report = dir.join("report.json");
    let out = run(&["analyze", "--input", tuple.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["p"], 2);
    assert_eq!(v["der_dim"].as_u64().unwrap(), v["blockdiag_dim"].as_u64().unwrap() + v["vz_dim"].as_u64().unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exact_analyze_agrees_on_lattice_sample() {
    let dir = work_dir();
    let tuple = dir.join("rat.json");
    let out = run(&["sample", "--p", "4", "--q", "5", "--seed", "3", "--dist", "rational-lattice", "--out", tuple.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&tuple).unwrap().contains("\"rational\""));

    let out = run(&["analyze", "--input", tuple.to_str().unwrap(), "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["der_dim"], v["exact"]["der_dim"]);
    assert_eq!(v["gl_dim"], v["exact"]["gl_dim"]);
    assert_eq!(v["sl_dim"], v["exact"]["sl_dim"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = work_dir();

    let bad_skew = dir.join("bad.json");
    std::fs::write(&bad_skew, r#"{"p":1,"q":2,"mode":"float","matrices":[[0.0,1.0,1.0,0.0]]}"#)
        .unwrap();
    let out = run(&["analyze", "--input", bad_skew.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("skew"));

    let zero_p = dir.join("zerop.json");
    std::fs::write(&zero_p, r#"{"p":0,"q":3,"mode":"float","matrices":[]}"#).unwrap();
    let out = run(&["analyze", "--input", zero_p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // dependent tuple: duplicate matrices
    let dep = dir.join("dep.json");
    std::fs::write(
        &dep,
        r#"{"p":2,"q":3,"mode":"float",
            "matrices":[[0.0,1.0,0.0,-1.0,0.0,0.0,0.0,0.0,0.0],
                        [0.0,2.0,0.0,-2.0,0.0,0.0,0.0,0.0,0.0]]}"#,
    )
    .unwrap();
    let out = run(&["analyze", "--input", dep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dependent"));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn flow_iteration_cap_gives_exit_1() {
    let dir = work_dir();
    let tuple = dir.join("t45.json");
    run(&["sample", "--p", "4", "--q", "5", "--seed", "8", "--out", tuple.to_str().unwrap()]);
    let out = run(&["flow", "--input", tuple.to_str().unwrap(), "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["flow"]["status"], "inconclusive");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn soliton_on_heisenberg_certifies_instantly() {
    let dir = work_dir();
    let tuple = dir.join("h.json");
    std::fs::write(&tuple, r#"{"p":1,"q":2,"mode":"float","matrices":[[0.0,1.0,-1.0,0.0]]}"#)
        .unwrap();
    let out = run(&["soliton", "--input", tuple.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["flow"]["status"], "closed_certified");
    assert_eq!(v["flow"]["iterations"], 0);
    let residual = v["certificate"]["residual"].as_f64().unwrap();
    assert!(residual < 1e-12);
    // |C|^2 = 2, so the certificate scales the unnormalized golden values by 1/2
    let c = v["certificate"]["c"].as_f64().unwrap();
    assert!((c + 0.75).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_is_tolerance_auditable() {
    // a pass at defaults, quickly
    let out = run(&["verify-counterexample", "--samples", "2", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));

    // an unreachable rank tolerance must fail loudly, not silently pass
    let out = run(&[
        "verify-counterexample", "--samples", "1", "--seed", "1", "--tol", "1e-30",
        "--max-iter", "200",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["overall_pass"], serde_json::Value::Bool(false));
    assert!(!v["failures"].as_array().unwrap().is_empty());

    // the exceptional type fails on minimality
    let out = run(&[
        "verify-counterexample", "--samples", "2", "--seed", "1", "--type", "2,5",
        "--max-iter", "500",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reasons = v["failures"][0]["reasons"].as_array().unwrap();
    assert!(reasons.iter().any(|r| r.as_str().unwrap().contains("not minimal")));
}

#[test]
fn survey_writes_csv_row() {
    let dir = work_dir();
    let json = dir.join("s.json");
    let csv = dir.join("s.csv");
    let out = run(&[
        "survey", "--p", "1", "--q", "2", "--samples", "5", "--seed", "11",
        "--out", json.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    // every (1,2) algebra is Heisenberg: soliton but never minimal derivations
    assert_eq!(report["frac_minimal_der"].as_f64().unwrap(), 0.0);
    assert_eq!(report["frac_closed_certified"].as_f64().unwrap(), 1.0);
    assert_eq!(report["frac_soliton_certified"].as_f64().unwrap(), 1.0);

    let csv_text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = csv_text.lines();
    assert!(lines.next().unwrap().starts_with("schema_version,p,q,"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("1,1,2,true,5,11,"));
    assert!(row.ends_with("6:5")); // der_dim histogram: all five samples at 6
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn survey_on_exceptional_type_reports_no_minimal_samples() {
    use nilsoliton_cli::pipeline::PipelineConfig;
    use nilsoliton_cli::survey::{run_survey, SurveyConfig};

    let mut pipeline = PipelineConfig::new(2, 5);
    pipeline.max_iter = 300; // open-orbit flows cannot certify; keep them short
    let report = run_survey(&SurveyConfig { pipeline, samples: 6, seed: 17 }).unwrap();
    assert_eq!(report.frac_minimal_der, 0.0);
    assert_eq!(report.frac_closed_certified, 0.0);
    assert_eq!(report.frac_soliton_certified, 0.0);
    assert!(report.exceptional);
    assert!(report.der_dim_histogram.keys().all(|&d| d > 11));
}

#[test]
fn workers_env_var_is_honored() {
    let out = Command::new(bin())
        .env("NILSOLITON_WORKERS", "2")
        .args(["survey", "--p", "1", "--q", "2", "--samples", "3", "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
