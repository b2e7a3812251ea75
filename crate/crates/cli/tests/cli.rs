use std::fs;
use std::process::{Command, Output};

fn tvbounds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvbounds"))
        .args(args)
        .env_remove("TVBOUNDS_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn bounds_equal_probabilities() {
    let out = tvbounds(&["bounds", "--lambda", "1", "--n", "10"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    let get = |k: &str| v[k].as_f64().unwrap();
    assert!((get("sum_p2") - 0.1).abs() < 1e-15);
    let tv = get("exact_tv");
    assert!(get("k1_lower") <= tv && get("corollary_lower") <= get("k1_lower"));
    assert!(tv <= get("bh_upper") && get("bh_upper") <= get("le_cam"));
}

#[test]
fn bounds_single_probability_is_tight() {
    let out = tvbounds(&["bounds", "--probs", "0.1", "--no-k1"]);
    assert!(out.status.success());
    let v = json(&out);
    let tv = v["exact_tv"].as_f64().unwrap();
    assert!((tv - 0.009_516_258_196_404_043).abs() < 1e-15);
    assert!((v["bh_upper"].as_f64().unwrap() - tv).abs() < 1e-15);
    assert!(v["k1_lower"].is_null());
}

#[test]
fn bounds_invalid_instances_exit_2() {
    for args in [
        &["bounds", "--probs", ""][..],
        &["bounds", "--probs", "0.5,1.5"],
        &["bounds", "--probs", "abc"],
        &["bounds", "--lambda", "5", "--n", "2"],
        &["bounds"],
    ] {
        let out = tvbounds(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bounds_missing_file_exit_3() {
    let out = tvbounds(&["bounds", "--probs-file", "/nonexistent/probs.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_from_csv_file_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.csv");
    fs::write(&input, "p\n0.1\n0.2\n").unwrap();
    let report = dir.path().join("r.csv");
    let out = tvbounds(&[
        "bounds",
        "--probs-file",
        input.to_str().unwrap(),
        "--no-k1",
        "--format",
        "csv",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&report).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,lambda,sum_p2"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    let tv: f64 = row[5].parse().unwrap();
    assert!((tv - 0.037_754_533_795_484_64).abs() < 1e-15);
}

#[test]
fn bounds_table_and_exact_limit() {
    let out = tvbounds(&["bounds", "--lambda", "2", "--n", "50", "--exact-limit", "10", "--no-k1"]);
    assert!(out.status.success());
    assert!(json(&out)["exact_tv"].is_null());
    let out = tvbounds(&["bounds", "--probs", "0.2 0.3", "--format", "table", "--no-k1"]);
    assert!(stdout(&out).contains("exact_tv"));
}

#[test]
fn sweep_closed_only_gates_columns() {
    let out = tvbounds(&[
        "sweep", "--lambda-min", "0.1", "--lambda-max", "100", "--points", "50", "--variants", "closed",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda,upper_coeff,k1_three,k1_common,k1_closed,bh_lower_coeff,ratio_three,ratio_common,ratio_closed,ratio_bh"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 50);
    for r in &rows {
        assert!(r[2].is_empty() && r[3].is_empty() && r[6].is_empty() && r[7].is_empty());
    }
    let last = rows.last().unwrap();
    assert_eq!(last[0], "100");
    let ratio: f64 = last[8].parse().unwrap();
    assert!((ratio - 10.539).abs() / 10.539 < 0.05);
}

#[test]
fn sweep_is_reproducible() {
    let args = ["sweep", "--lambda-min", "0.5", "--lambda-max", "5", "--points", "4", "--grid", "6"];
    assert_eq!(tvbounds(&args).stdout, tvbounds(&args).stdout);
}

#[test]
fn sweep_invalid_range_exit_2() {
    let out = tvbounds(&["sweep", "--lambda-min", "5", "--lambda-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tvbounds(&["sweep", "--lambda-min", "1", "--lambda-max", "2", "--points", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tvbounds(&["sweep", "--lambda-min", "1", "--lambda-max", "2", "--variants", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_limits_and_stein_pass() {
    for suite in ["limits", "stein"] {
        let out = tvbounds(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).contains("0 failed"));
    }
}

#[test]
fn verify_sandwich_seeded() {
    let out = tvbounds(&["verify", "--suite", "sandwich", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("200 instances, 0 violations"));
}

#[test]
fn config_file_and_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("budget.conf");
    fs::write(&cfg, "exact_limit = 1\n").unwrap();
    let out = tvbounds(&["--config", cfg.to_str().unwrap(), "bounds", "--probs", "0.1,0.2", "--no-k1"]);
    assert!(json(&out)["exact_tv"].is_null());

    // flags override the file
    let out = tvbounds(&[
        "--config", cfg.to_str().unwrap(), "bounds", "--probs", "0.1,0.2", "--no-k1", "--exact-limit", "5",
    ]);
    assert!(json(&out)["exact_tv"].is_number());

    let out = Command::new(env!("CARGO_BIN_EXE_tvbounds"))
        .args(["bounds", "--probs", "0.1,0.2", "--no-k1"])
        .env("TVBOUNDS_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(json(&out)["exact_tv"].is_null());

    fs::write(&cfg, "grid = many\n").unwrap();
    let out = tvbounds(&["--config", cfg.to_str().unwrap(), "verify", "--suite", "limits"]);
    assert_eq!(out.status.code(), Some(2));
}
