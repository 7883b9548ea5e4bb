use std::process::{Command, Output};

use serde_json::Value;
use wittring::{ClassRecord, WittClass, WittContext};

fn wittring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = wittring(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.push("--json");
    serde_json::from_str(&stdout(&args)).expect("valid JSON")
}

fn stderr_of_failure(args: &[&str]) -> String {
    let out = wittring(args);
    assert_eq!(out.status.code(), Some(2), "{args:?} should be rejected");
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "diagnostic is one line: {err}");
    err
}

#[test]
fn field_info_f7() {
    let text = stdout(&["field-info", "--q", "7"]);
    assert!(text.contains("s          3"));
    assert!(text.contains("q mod 4    3"));
    let v = json(&["field-info", "--q", "7"]);
    assert_eq!(v["s"], 3);
    assert_eq!(v["q_mod_4"], 3);
    assert_eq!(v["minus_one_class"], "s");
}

#[test]
fn field_info_f9() {
    let v = json(&["field-info", "--q", "3^2"]);
    assert_eq!(v["q"], 9);
    assert_eq!(v["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["s"], serde_json::json!([1, 1]));
    assert_eq!(v, json(&["field-info", "--q", "9"]));
}

#[test]
fn wittk_table_f5() {
    let v = json(&["wittk-table", "--q", "5"]);
    assert_eq!(v["elements"], serde_json::json!(["0", "1", "s", "e"]));
    // q ≡ 1: the additive group is (Z/2)^2
    for (i, row) in v["add"].as_array().unwrap().iter().enumerate() {
        assert_eq!(row[i], "0");
    }
    assert_eq!(v["add"][1][2], "e");
    assert_eq!(v["mul"][2][2], "1");
    assert_eq!(v["mul"][3][3], "0");
    let bullets = v["bullets"].as_array().unwrap();
    assert_eq!(bullets.len(), 4);
    assert!(bullets.iter().all(|b| b["applies"] == false || b["holds"] == true));
}

#[test]
fn wittk_table_f7_is_cyclic() {
    let v = json(&["wittk-table", "--q", "7"]);
    assert_eq!(v["add"][1][1], "e");
    assert_eq!(v["add"][3][1], "s");
    assert_eq!(v["add"][3][3], "0");
}

#[test]
fn curve_table_f7_rank_one() {
    let v = json(&["curve-table", "--q", "7", "--r", "1"]);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 8);
    for op in ["add", "mul"] {
        let t = v[op].as_array().unwrap();
        assert_eq!(t.len(), 8);
        assert!(t.iter().all(|row| row.as_array().unwrap().len() == 8));
    }
    // <1> + <1> = <1,1> = <1,-s> when q ≡ 3
    assert_eq!(v["add"][1][1], 3);
    let text = stdout(&["curve-table", "--q", "7", "--r", "1"]);
    assert!(text.contains("<1,-(LM)_suv>"));
    assert!(text.contains("8 classes"));
}

#[test]
fn curve_table_rank_bound() {
    let err = stderr_of_failure(&["curve-table", "--q", "7", "--r", "5"]);
    assert!(err.contains("rank 5"));
}

#[test]
fn curve_eval_word_and_expr_agree() {
    let a = json(&["curve-eval", "--q", "7", "--r", "2", "--word", "(1,01);(s,10)"]);
    let b = json(&["curve-eval", "--q", "7", "--r", "2", "--expr", "<1:01, s:10>"]);
    assert_eq!(a, b);
    assert_eq!(a["class"]["parity"], "even");
    assert_eq!(a["class"]["L"], "11");
}

#[test]
fn printed_classes_round_trip() {
    for (q, word) in [
        ("7", "(s,011)"),
        ("5", "(1,101);(s,011)"),
        ("3", "(s,000);(s,111);(1,010)"),
    ] {
        let v = json(&["curve-eval", "--q", q, "--r", "3", "--word", word]);
        let record: ClassRecord = serde_json::from_value(v["class"].clone()).unwrap();
        let ctx = WittContext::from_residue(q.parse::<u32>().unwrap() % 4).unwrap();
        let class = WittClass::from_record(ctx, &record).unwrap();
        assert_eq!(serde_json::to_value(class.to_record()).unwrap(), v["class"]);
        assert_eq!(class.to_string(), v["display"]);
    }
}

#[test]
fn normal_form_text_and_json_inputs() {
    let a = json(&["curve-normal-form", "--q", "5", "--r", "1", "--element", "(e,0);(s,1)"]);
    let records = serde_json::to_string(&a["element"]).unwrap();
    let b = json(&["curve-normal-form", "--q", "5", "--r", "1", "--element", &records]);
    assert_eq!(a, b);
    assert_eq!(
        a["normal_form"],
        serde_json::json!({"parity": "odd", "u": "1", "L": "1"})
    );
}

#[test]
fn sum_of_all_monomials() {
    let v = json(&[
        "curve-normal-form",
        "--q",
        "7",
        "--r",
        "2",
        "--element",
        "(1,00);(1,01);(1,10);(1,11)",
    ]);
    // four odd letters give an even class
    assert_eq!(v["normal_form"]["parity"], "even");
    let gen = json(&[
        "curve-normal-form",
        "--q",
        "5",
        "--r",
        "2",
        "--element",
        "(1,00);(1,01);(1,10);(1,11)",
    ]);
    // q ≡ 1: -<1> = <1>, so the element is itself a generator
    assert_eq!(gen["display"], "0");
}

#[test]
fn form_commands() {
    let v = json(&["form-diag", "--q", "7", "--gram", "0,1;1,0"]);
    assert_eq!(v["invariants"]["witt_class"], "0");
    assert_eq!(v["diagonal"].as_array().unwrap().len(), 2);
    let w = json(&["form-witt", "--q", "7", "--diag", "1,1,1"]);
    assert_eq!(w["hyperbolic_planes"], 1);
    assert_eq!(w["invariants"]["witt_class"], "s");
    let w = json(&["form-witt", "--q", "7", "--diag", "1,1"]);
    assert_eq!(w["isotropic_vector"], Value::Null);
    let w = json(&["form-witt", "--q", "9", "--diag", "(1,1),-1"]);
    assert_eq!(w["form"], serde_json::json!([[1, 1], [2, 0]]));
}

#[test]
fn diagnostics() {
    assert!(stderr_of_failure(&["field-info", "--q", "8"]).contains("characteristic 2"));
    assert!(stderr_of_failure(&["field-info", "--q", "12"]).starts_with("error:"));
    assert!(stderr_of_failure(&["form-diag", "--q", "7", "--gram", "1,2;3,1"]).contains("symmetric"));
    assert!(stderr_of_failure(&["form-witt", "--q", "7", "--diag", "1,0"]).starts_with("error:"));
    assert!(stderr_of_failure(&["curve-eval", "--q", "7", "--r", "2", "--word", "(1,011)"]).contains("rank"));
    assert!(stderr_of_failure(&["curve-eval", "--q", "7", "--r", "1", "--expr", "<1> +"]).starts_with("error:"));
    assert!(stderr_of_failure(&["verify", "--only", "42"]).contains("42"));
}

#[test]
fn output_is_deterministic() {
    let args = ["curve-table", "--q", "9", "--r", "2"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn verify_selected_checks() {
    let v = json(&["verify", "--only", "1", "--only", "10"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    let text = stdout(&["verify", "--only", "6"]);
    assert!(text.starts_with("[PASS]  6"));
}
