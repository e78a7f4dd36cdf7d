use std::process::{Command, Output};

use serde_json::Value;

fn liecurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liecurv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> (Value, String) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = liecurv(&all);
    let text = stdout(&o);
    (serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")), text)
}

#[test]
fn algebra_f4() {
    let o = liecurv(&["algebra", "--type", "f4"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("dim: 52"));
    assert!(s.contains("roots: 48"));
    assert!(s.contains("jacobi: pass"));
}

#[test]
fn algebra_d4_and_unsupported() {
    let (v, _) = json(&["algebra", "--type", "d4"]);
    assert_eq!(v["dim"], 28);
    assert_eq!(v["jacobi"]["passed"], true);
    let o = liecurv(&["algebra", "--type", "e8"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unsupported type"));
}

#[test]
fn decompose_default_pair() {
    let o = liecurv(&["decompose", "--theta", "0001", "--tau", "0010"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("block dims: 28/8/8/8"));
    assert!(s.contains("fixed subalgebra of theta: B4"));
    assert!(s.contains("h1: D4"));
    let (v, _) = json(&["decompose"]);
    assert_eq!(v["dims"], serde_json::json!([28, 8, 8, 8]));
    assert_eq!(v["grading_consistent"], true);
    assert_eq!(v["grading"][1][2], "h4");
    assert!(v["modules"].as_array().unwrap().iter().all(|m| m["irreducible"] == true && m["dim"] == 8));
}

#[test]
fn decompose_rejects_degenerate_and_malformed_pairs() {
    let o = liecurv(&["decompose", "--tau", "0001"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("degenerate"));
    assert_eq!(code(&liecurv(&["decompose", "--theta", "0000"])), 3);
    assert_eq!(code(&liecurv(&["decompose", "--theta", "01x1"])), 3);
    assert_eq!(code(&liecurv(&["decompose", "--theta", "001"])), 3);
}

#[test]
fn ricci_values() {
    let (v, _) = json(&["ricci", "--u", "1,1,1,1"]);
    for p in v["paths"].as_array().unwrap() {
        assert_eq!(p["ricci"], serde_json::json!(["9/2", "9/2", "9/2", "9/2"]));
    }
    assert_eq!(v["einstein"], true);
    let o = liecurv(&["ricci", "--u", "3/5,1,1,1"]);
    let s = stdout(&o);
    assert_eq!(s.matches("59/10 (5.9)").count(), 12, "{s}");
    assert!(s.contains("\nEinstein"));
    let s = stdout(&liecurv(&["ricci", "--u", "1,1,1,2", "--path", "connection"]));
    assert!(s.contains("not Einstein"));
    assert!(s.contains("37/8"));
}

#[test]
fn ricci_float_and_negative_killing() {
    let (v, _) = json(&["ricci", "--u", "0.5,1.5,1,2"]);
    assert!(v["max_disagreement"].as_f64().unwrap() < 1e-12);
    let (v, _) = json(&["ricci", "--u", "1,1,1,1", "--normalization", "negative-killing"]);
    assert_eq!(v["paths"][0]["ricci"][0], "1/4");
}

#[test]
fn ricci_input_errors() {
    assert_eq!(code(&liecurv(&["ricci", "--u", "0,1,1,1"])), 4);
    assert_eq!(code(&liecurv(&["ricci", "--u", "-1,1,1,1"])), 4);
    assert_eq!(code(&liecurv(&["ricci", "--u", "1,1,1"])), 4);
    assert_eq!(code(&liecurv(&["ricci", "--u", "1,1,1,1", "--path", "spectral"])), 4);
    assert_eq!(code(&liecurv(&["ricci", "--u", "1,1,1,1", "--normalization", "trace"])), 4);
    assert_eq!(code(&liecurv(&["ricci", "--u", "1,1,1,1", "--frobnicate"])), 4);
    assert_eq!(code(&liecurv(&[])), 4);
    assert_eq!(code(&liecurv(&["--help"])), 0);
}

#[test]
fn solve_lists_four_classes() {
    let o = liecurv(&["solve"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(1).take(4).collect();
    assert_eq!(rows.iter().filter(|r| r.contains(" *")).count(), 1);
    assert!(rows[3].starts_with("non-naturally-reductive"));

    let (v, _) = json(&["solve"]);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 4);
    for key in ["u", "constant", "residual", "exact", "classification", "provenance"] {
        assert!(sols.iter().all(|s| s.get(key).is_some()), "{key}");
    }
    assert_eq!(sols[1]["u"], serde_json::json!(["3/5", "1", "1", "1"]));
    assert_eq!(sols[2]["constant"], "135/22");
    assert_eq!(sols[3]["exact"], false);
    assert_eq!(v["sweep"]["grid_points"], 174_999);
}

#[test]
fn solve_is_tolerance_insensitive() {
    let classes = |args: &[&str]| -> Vec<Value> {
        let (v, _) = json(args);
        v["solutions"].as_array().unwrap().iter().map(|s| s["classification"].clone()).collect()
    };
    assert_eq!(classes(&["solve"]), classes(&["solve", "--tol", "1e-6"]));
    assert_eq!(code(&liecurv(&["solve", "--tol", "-1"])), 4);
}

#[test]
fn verify_paper_passes() {
    let o = liecurv(&["verify-paper"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let (v, _) = json(&["verify-paper"]);
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    let criteria: std::collections::BTreeSet<u64> = checks.iter().map(|c| c["criterion"].as_u64().unwrap()).collect();
    assert_eq!(criteria.len(), 8);
    assert!(checks.iter().all(|c| c.get("expected").is_some() && c.get("computed").is_some()));
}

#[test]
fn verify_paper_catches_wrong_casimir_entry() {
    let o = liecurv(&["verify-paper", "--inject-casimir", "2,3"]);
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    assert!(s.contains("FAIL [2] column 3 sum: expected 18, computed 19"), "{s}");
    assert_eq!(code(&liecurv(&["verify-paper", "--inject-casimir", "5,1"])), 4);
}

#[test]
fn output_is_deterministic_and_json_round_trips() {
    for args in [&["solve"][..], &["verify-paper"], &["decompose"], &["brackets"], &["ricci", "--u", "0.7,1,1,1.4"]] {
        let (v, first) = json(args);
        let (_, second) = json(args);
        assert_eq!(first, second, "{args:?}");
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again, first, "{args:?}");
        let reparsed: Value = serde_json::from_str(&again).unwrap();
        assert_eq!(reparsed, v);
    }
    assert_eq!(stdout(&liecurv(&["solve"])), stdout(&liecurv(&["solve"])));
}

#[test]
fn output_file_and_thread_cap() {
    let path = std::env::temp_dir().join(format!("liecurv-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = liecurv(&["brackets", "--format", "json", "--output", p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["column_sums"], serde_json::json!(["18", "18", "18", "18"]));
    std::fs::remove_file(&path).ok();

    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_liecurv")).env("LIECURV_THREADS", threads).args(["solve"]).output().unwrap()
    };
    let one = run("1");
    assert_eq!(code(&one), 0);
    assert_eq!(stdout(&one), stdout(&liecurv(&["solve"])));
    assert_eq!(code(&run("zero")), 4);
    assert_eq!(code(&run("0")), 4);
}
