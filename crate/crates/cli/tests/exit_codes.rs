use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (Option<i32>, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_veechkit")).args(args).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code(), v)
}

#[test]
fn success_echoes_the_command() {
    let (code, v) = run(&["analyze", "four-square"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["ok"], true);
    assert_eq!(v["command"]["name"], "analyze");
    assert_eq!(v["results"]["type"]["genus"], 2);
}

#[test]
fn unknown_input_is_an_input_error() {
    let (code, v) = run(&["analyze", "no-such-surface"]);
    assert_eq!(code, Some(2));
    assert_eq!(v["ok"], false);
}

#[test]
fn malformed_json_is_an_input_error() {
    let path = std::env::temp_dir().join("veechkit-malformed.json");
    std::fs::write(&path, "{ not json").unwrap();
    let (code, _) = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, Some(2));
}

#[test]
fn non_unimodular_generator_is_an_input_error() {
    let (code, _) = run(&["veech", "four-square", "--check", "2,0,0,1"]);
    assert_eq!(code, Some(2));
}

#[test]
fn trivial_moduli_is_a_verdict_failure() {
    let (code, v) = run(&["analyze", "torus", "--pipeline"]);
    assert_eq!(code, Some(1));
    assert_eq!(v["ok"], false);
}

#[test]
fn failing_generator_check_exits_one() {
    let (code, v) = run(&["veech", "octagon", "--check", "1,1,0,1"]);
    assert_eq!(code, Some(1));
    assert_eq!(v["ok"], false);
}
