use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.txt"))
        .to_string_lossy()
        .into_owned()
}

fn copos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copos")).args(args).output().unwrap()
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let out = copos(args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (code, v)
}

fn labels(v: &Value) -> Vec<String> {
    v["labels"].as_array().unwrap().iter().map(|l| l["tag"].as_str().unwrap().to_owned()).collect()
}

#[test]
fn classify_fixtures() {
    let (code, v) = json_run(&["classify", &fixture("sign_pattern_b")]);
    assert_eq!(code, 0);
    assert!(labels(&v).contains(&"Mn".to_owned()));
    assert!(v["row_signs"]["nonpos_rows"].is_array());
    assert!(v["idx"].is_u64());
    let (_, v) = json_run(&["classify", &fixture("identity_3")]);
    let l = labels(&v);
    assert!(l.contains(&"ZMatrix".to_owned()) && l.contains(&"QPlus".to_owned()));
}

#[test]
fn parse_errors_carry_position() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("short.txt");
    std::fs::write(&path, "3\n1 2 3\n2 1 3\n3 3\n").unwrap();
    let out = copos(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":4:4:") && err.contains("expected 9 entries"), "{err}");
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(copos(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(copos(&["classify"]).status.code(), Some(3));
    assert_eq!(copos(&["--eps-opt", "-1", "classify", &fixture("horn")]).status.code(), Some(3));
    assert_eq!(copos(&["classify", "/nonexistent/file.txt"]).status.code(), Some(3));
    assert_eq!(copos(&["--help"]).status.code(), Some(0));
}

#[test]
fn decompose_exit_codes() {
    let (code, v) = json_run(&["decompose", &fixture("horn")]);
    assert_eq!(code, 1);
    assert_eq!(v["kind"], "witness");
    assert!(v["objective"].as_f64().unwrap() < -1e-6);
    assert!(v["X"].is_string());
    let (code, v) = json_run(&["decompose", &fixture("ones_4")]);
    assert_eq!(code, 0);
    let p: copos_core::SymMatrix = serde_json::from_value(v["psd_part"].clone()).unwrap();
    assert_eq!(p.max_abs(), 0.0);
    let (code, v) = json_run(&["decompose", &fixture("extraneous_q_minus_e")]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "certificate");
}

#[test]
fn stqp_reports() {
    let (code, v) = json_run(&["stqp", &fixture("extraneous_q")]);
    assert_eq!(code, 0);
    assert!((v["z_spn"].as_f64().unwrap() - 1.0).abs() <= 1e-5);
    assert_eq!(v["tight"], true);
    for key in ["z_star", "minimizer", "z_spn_interval", "z_dnn", "gap", "certificates"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let (_, v) = json_run(&["stqp", "--separable", &fixture("alpha_zero_4"), &fixture("beta_ones_4")]);
    assert!((v["z_star"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let (_, v) = json_run(&["stqp", &fixture("horn")]);
    assert_eq!(v["tight"], false);
}

#[test]
fn orbit_reports_each_method() {
    let (code, v) = json_run(&["orbit", &fixture("five_cycle")]);
    assert_eq!(code, 1);
    for m in ["permute", "rescale", "joint"] {
        assert_eq!(v[m]["found"], false, "{m}");
    }
    let (code, v) = json_run(&["orbit", &fixture("extraneous_q")]);
    assert_eq!(code, 0);
    assert_eq!(v["permute"]["found"], true);
    assert_eq!(v["permute"]["perm"].as_array().unwrap().len(), 5);
}

#[test]
fn signgraph_json_and_dot() {
    let (code, v) = json_run(&["signgraph", &fixture("sign_pattern_a")]);
    assert_eq!(code, 0);
    assert_eq!(v["positive_threshold"], true);
    assert_eq!(v["negative_threshold"], true);
    assert_eq!(v["negative"][0].as_array().unwrap().len(), 5);
    let out = copos(&["signgraph", &fixture("horn"), "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph positive {") && dot.contains("graph negative {"));
}

#[test]
fn text_format_is_a_table() {
    let out = copos(&["--format", "text", "classify", &fixture("horn")]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l.starts_with("labels ")), "{s}");
}

#[test]
fn selftest_small_run() {
    let (code, v) = json_run(&["selftest", "--cases", "25", "--seed", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["suites"].as_array().unwrap().len(), 6);
    let (_, w) = json_run(&["selftest", "--cases", "25", "--seed", "4", "--suite", "duality"]);
    assert_eq!(w["suites"][0], v["suites"][3]);
}
