use std::process::{Command, Output};

use serde_json::Value;

fn lbcv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lbcv"))
        .args(args)
        .env_remove("BCV_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn classify_cases() {
    let table = [
        (["1", "0"], "shrinking", Some(2.0), "(ii)"),
        (["1", "1"], "none", None, "(i)"),
        (["2", "-1"], "steady", Some(0.0), "(iii)"),
        (["0", "1"], "shrinking", Some(4.0), "(iv)"),
        (["0", "-0.5"], "expanding", Some(-2.0), "(v)"),
    ];
    for ([l, m], kind, gamma, case) in table {
        let out = lbcv(&["classify", "--lambda", l, "--mu", m]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["kind"], kind, "{l} {m}");
        assert_eq!(v["case"], case);
        assert_eq!(v["gamma"].as_f64(), gamma);
        assert!(v["max_residual"].is_null());
        assert!(v["tool_version"].is_string());
    }
}

#[test]
fn generic_negative_mu_carries_caveat() {
    let v = json(&lbcv(&["classify", "--lambda", "1", "--mu", "-1"]));
    assert_eq!(v["kind"], "none");
    assert_eq!(v["case"], "(iii)");
    assert!(v["caveat"].as_str().is_some_and(|s| !s.is_empty()));
}

#[test]
fn verify_case1b_seeded() {
    let out = lbcv(&["verify", "--lambda", "2", "--mu", "-1", "--case", "1b", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 6);
    assert!(num(&v, "max_residual") <= 1e-9);
    assert_eq!(v["per_equation_max"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_wrong_case_is_usage_error() {
    let out = lbcv(&["verify", "--lambda", "1", "--mu", "1", "--case", "1a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_case2_with_shift() {
    let out = lbcv(&["verify", "--lambda", "0", "--mu", "1", "--case", "2", "--a", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(num(&v, "gamma"), 4.0);
    assert_eq!(v["coefficients"], serde_json::json!([3.0]));
}

#[test]
fn verify_non_soliton_exits_one() {
    let out = lbcv(&[
        "verify", "--lambda", "0", "--mu", "0", "--case", "custom", "--gamma", "0",
        "--coeffs", "0,0,1,0,0,0,0,0,0,0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verified"], false);
    assert!(num(&v, "max_residual") > 0.5);
    assert_eq!(v["worst_point"].as_array().unwrap().len(), 3);
}

#[test]
fn custom_killing_field_verifies() {
    // (-y, x, 0) is a rotation of flat space: Killing, so a soliton with gamma = 0.
    let out = lbcv(&[
        "verify", "--lambda", "0", "--mu", "0", "--case", "custom", "--gamma", "0",
        "--coeffs", "0,0,-1,0,0,1,0,0,0,0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_inputs_exit_two() {
    for args in [
        &["classify", "--lambda", "nan", "--mu", "0"][..],
        &["classify", "--lambda", "inf", "--mu", "0"],
        &["verify", "--lambda", "1", "--mu", "0", "--case", "1a", "--tol", "0"],
        &["verify", "--lambda", "1", "--mu", "0", "--case", "1a", "--grid", "0:1"],
        &["verify", "--lambda", "0", "--mu", "0", "--case", "custom", "--coeffs", "1,2"],
        &["geometry", "--lambda", "0", "--mu", "-1", "--point", "2,0,0"],
        &["sweep", "--lambda-range", "1:0:3"],
    ] {
        assert_eq!(lbcv(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn geometry_values() {
    let out = lbcv(&["geometry", "--lambda", "1", "--mu", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let diag: Vec<f64> = v["ricci_diagonal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(diag, vec![3.0, 3.0, 0.0]);
    assert!((num(&v, "R1212") - 2.75).abs() < 1e-12);
    assert!((num(&v, "R1313") - 0.25).abs() < 1e-12);
    assert!((num(&v, "R2323") - 0.25).abs() < 1e-12);
    assert_eq!(v["bracket_13"], serde_json::json!([0.0, 0.0, 0.0]));
}

#[test]
fn sweep_grid_and_empty() {
    let out = lbcv(&["sweep", "--lambda-range", "0:2:3", "--mu-range", "-1:1:3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let keys: Vec<(f64, f64)> = rows.iter().map(|r| (num(r, "lambda"), num(r, "mu"))).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);

    let out = lbcv(&["sweep", "--lambda-range", "0:1:0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!([]));

    let out = lbcv(&["sweep", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.starts_with("lambda,mu,kind,gamma,case"));
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--seed", "11", "--format", "csv"];
    assert_eq!(lbcv(&args).stdout, lbcv(&args).stdout);
    let args = ["verify", "--lambda", "0", "--mu", "0", "--case", "3"];
    assert_eq!(lbcv(&args).stdout, lbcv(&args).stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_lbcv"));
        cmd.args(["verify", "--lambda", "1", "--mu", "0", "--case", "1a"]);
        cmd.env_remove("BCV_SEED");
        if let Some(s) = env {
            cmd.env("BCV_SEED", s);
        }
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        json(&cmd.output().unwrap())
    };
    let from_env = run(Some("5"), None);
    assert_eq!(from_env["seed"], 5);
    assert_eq!(from_env["coefficients"], run(None, Some("5"))["coefficients"]);
    assert_eq!(run(Some("5"), Some("9"))["seed"], 9);
    assert_eq!(run(None, None)["seed"], 0);
}
