use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilbohr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_line(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(stdout(o).lines().next().unwrap()).unwrap()
}

#[test]
fn bohr_rotation_by_a_quarter() {
    let o = run(&["bohr", "--expr", "lin:0.25", "--eps", "0.1", "--window", "0", "12"]);
    assert_eq!(json_line(&o)["members"], serde_json::json!([0, 4, 8, 12]));
    let f = run(&["bohr", "--expr", "lin:0.25", "--eps", "0.1", "--window", "0", "12", "--arith", "float"]);
    assert_eq!(json_line(&f)["members"], serde_json::json!([0, 4, 8, 12]));
}

#[test]
fn lambda_d2_exact_text() {
    let o = run(&["lambda", "--d", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), r#"{"lambdas":[-2,1],"lambda":2,"K":6}"#);
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "all"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 11);
    assert!(lines.iter().all(|l| l["passed"] == Value::Bool(true)));
}

#[test]
fn verify_single_suite_by_name_and_number() {
    assert_eq!(run(&["verify", "vandermonde"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "11"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(run(&["bohr", "--expr", "lin:abc", "--eps", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["nil-return", "--alpha", "0.1", "--eta", "0.7"]).status.code(), Some(2));
    assert_eq!(run(&["lambda"]).status.code(), Some(2));
    assert_eq!(run(&["sgd", "--seq", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["cdiff", "--set", "{broken"]).status.code(), Some(2));
    assert_eq!(run(&["ramsey-check", "--seq", "1,2,3"]).status.code(), Some(2));
    assert_eq!(run(&["gp-eval", "--expr", "lin:1/2", "--window", "5", "1"]).status.code(), Some(2));
    assert_eq!(run(&["multi-return", "--d", "1", "--alpha", "0.1", "--eps", "0.1", "--arith", "exact"]).status.code(), Some(2));
}

#[test]
fn z1d_csv_columns() {
    let o = run(&["z1d", "--alpha", "1/3", "--window", "-1", "2", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["n,value", "-1,-1/3", "0,0", "1,1/3", "2,-1/3"]);
}

#[test]
fn window_set_json_round_trips_through_cdiff() {
    let o = run(&["cdiff", "--set", "0,2,3", "--window", "0", "5"]);
    let v = json_line(&o);
    assert_eq!(v["members"], serde_json::json!([-3, -2, -1, 0, 1, 2, 3]));
    let again = run(&["cdiff", "--set", &v.to_string(), "--d", "1"]);
    assert_eq!(json_line(&again)["window"], serde_json::json!([-10, 10]));
}

#[test]
fn output_independent_of_thread_count() {
    let args = ["nil-return", "--alpha", "1/7", "2/9", "--eta", "1/10", "--window", "-400", "400"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn set_family_records() {
    let o = run(&["sgd", "--seq", "1,10,100", "--d", "1"]);
    assert_eq!(json_line(&o)["values"], serde_json::json!(["1", "10", "11", "100", "110", "111"]));
    let v = json_line(&run(&["fs", "--seq", "pow:3,5"]));
    assert_eq!(v["count"], serde_json::json!(31));
    assert_eq!(run(&["fs", "--seq", "pow:2,25"]).status.code(), Some(2));
    let big = json_line(&run(&["sgd", "--seq", "pow:3,41", "--d", "1"]));
    let values = big["values"].as_array().unwrap();
    assert!(values.contains(&Value::String("36472996377170786403".into())));
}

#[test]
fn ramsey_check_default_sequence() {
    let v = json_line(&run(&["ramsey-check"]));
    let blocks = v["star_in_blocks"].as_array().unwrap();
    assert!(blocks.iter().all(|b| b["found"] == Value::Bool(false)));
    assert_eq!(v["star_in_sg2"]["found"], Value::Bool(true));
}

#[test]
fn torus_return_matches_rotation() {
    let v = json_line(&run(&["torus-return", "--d", "1", "--alpha", "1/4", "--eps", "1/10", "--window", "0", "12"]));
    assert_eq!(v["members"], serde_json::json!([0, 4, 8, 12]));
    let sys = r#"{"d":1,"alpha":"1/4"}"#;
    let nb = r#"{"center":["0"],"radii":["1/10"]}"#;
    let w = json_line(&run(&["torus-return", "--system", sys, "--nbhd", nb, "--window", "0", "12"]));
    assert_eq!(v, w);
}

#[test]
fn multi_return_witness_lines() {
    let o = run(&["multi-return", "--d", "2", "--alpha", "0.137", "--eps", "0.05", "--window", "0", "100", "--witnesses"]);
    assert!(o.status.success());
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let members = lines[0]["members"].as_array().unwrap().clone();
    assert_eq!(lines.len(), 1 + members.len());
    for (m, w) in members.iter().zip(&lines[1..]) {
        assert_eq!(&w["n"], m);
    }
}
