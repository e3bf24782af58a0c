use std::process::{Command, Output};

use ringspec::ringgraph::ClassificationRecord;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "10", "1111111110", "--json"]);
    assert_eq!(v["essentially_cyclic"], false);
    assert_eq!(v["case"], "T2-one-missing");

    let v = json(&["classify", "10", "0111101111", "--json", "--numeric"]);
    assert_eq!(v["essentially_cyclic"], false);
    assert_eq!(v["case"], "T3-balanced");
    assert_eq!(v["gaps"], serde_json::json!([5, 5]));
    assert_eq!(v["agrees"], true);

    let v = json(&["classify", "6", "000000", "--json"]);
    assert_eq!(v["essentially_cyclic"], true);
    assert_eq!(v["case"], "T1-cycle");
}

#[test]
fn classify_json_round_trips() {
    for (n, mask) in [("7", "0111011"), ("8", "01010110"), ("5", "11111")] {
        let out = run(&["classify", n, mask, "--json"]);
        let text = stdout(&out);
        let rec: ClassificationRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(rec.mask, mask);
        assert_eq!(serde_json::to_string(&rec).unwrap(), text.trim_end());
    }
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        &["classify", "5", "0101"][..],
        &["classify", "5", "01a10"],
        &["classify", "2", "00"],
        &["trees", "4", "--i", "4"],
        &["weighted", "k3", "--weights", "[[0,1],[1,0]]"],
        &["weighted", "k3", "--weights", "not json"],
        &["simulate", "3", "000", "--x0", "e9"],
        &["simulate", "3", "000", "--step", "5"],
        &["scan", "--n-min", "2", "--n-max", "4"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn trees_outputs() {
    assert_eq!(json(&["trees", "4", "--i", "2"]), serde_json::json!({"t": 6}));
    let v = json(&["trees", "4", "0101"]);
    assert_eq!(v["total"], 6);
    assert_eq!(v["per_root"].as_array().unwrap().len(), 4);
}

#[test]
fn fig6_boundary() {
    let v = json(&["weighted", "fig6", "--p", "3"]);
    let b = v["boundary"].as_array().unwrap();
    assert!((b[0].as_f64().unwrap() - 0.266).abs() < 1e-3);
    assert!((b[1].as_f64().unwrap() - 2.441).abs() < 1e-3);
}

#[test]
fn k3_unit_cycle() {
    let v = json(&["weighted", "k3", "--weights", "[[0,1,0],[0,0,1],[1,0,0]]"]);
    assert_eq!(v["discriminant"], -3.0);
    assert_eq!(v["essentially_cyclic"], true);
    assert_eq!(v["numeric_essentially_cyclic"], true);
}

#[test]
fn c4_csv() {
    let out = run(&["weighted", "c4", "--a-max", "12", "--x-max", "12", "--steps", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sqrt_a,sqrt_x,discriminant,cyclic,triangle_ok"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 25);
    for r in &rows {
        let d: f64 = r[2].parse().unwrap();
        assert_eq!(r[3] == "true", d < 0.0);
        if r[4] == "true" {
            assert_eq!(r[3], "true");
        }
        if r[0] == "0" {
            assert_eq!(r[3], "false");
        }
    }
}

#[test]
fn spectrum_methods_agree() {
    let v = json(&["spectrum", "7", "0111011", "--method", "both"]);
    assert!(v["distance"].as_f64().unwrap() < 1e-9);
    let v = json(&["spectrum", "8", "01010110", "--method", "exact"]);
    assert!(v["closed_form"].is_null());
    assert!(v.get("numeric").is_none());
    let v = json(&["spectrum", "8", "01010110", "--method", "numeric"]);
    assert_eq!(v["numeric"].as_array().unwrap().len(), 8);
}

#[test]
fn simulate_csv() {
    let out = run(&["simulate", "4", "0101", "--step", "0.01", "--horizon", "1", "--x0", "1,0,0,-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x_1,x_2,x_3,x_4");
    assert_eq!(lines[1], "0,1,0,0,-1");
    assert_eq!(lines.len(), 102);
    let last: Vec<f64> = lines[101].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[0] - 1.0).abs() < 1e-9);
}

#[test]
fn scan_small_range_is_clean_and_deterministic() {
    let a = run(&["scan", "--n-min", "3", "--n-max", "8"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a).trim(), "0 disagreements over 504 instances");
    let b = Command::new(env!("CARGO_BIN_EXE_ringspec"))
        .args(["scan", "--n-min", "3", "--n-max", "8", "--parallel"])
        .env("RINGSPEC_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn outputs_are_deterministic() {
    let args = ["simulate", "5", "01101", "--x0", "random:9", "--horizon", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
