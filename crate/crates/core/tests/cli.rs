use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wallform")).args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = run(&full);
    let code = out.status.code().unwrap();
    let value = if out.stdout.is_empty() { Value::Null } else { serde_json::from_slice(&out.stdout).unwrap() };
    (value, code)
}

fn space_arg(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn analyze_h4f2() {
    let (v, code) = run_json(&["analyze", "--space", &space_arg("h4f2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["alternating"], true);
    assert_eq!(v["residual_dim"], 2);
    assert_eq!(v["fixed_dim"], 2);
    assert_eq!(v["unipotency_index"], 2);
    assert_eq!(v["wall_gram"], json!([["0", "1"], ["1", "0"]]));
}

#[test]
fn analyze_identity_and_r2t() {
    let (v, _) = run_json(&["analyze", "--space", &space_arg("h4f2_identity.json")]);
    assert_eq!(v["wall_gram"], json!([]));
    assert_eq!(v["residual_dim"], 0);
    let (v, _) = run_json(&["analyze", "--space", &space_arg("r2t.json")]);
    assert_eq!(v["wall_gram"], json!([["t"]]));
    assert_eq!(v["spinor_norms"], json!([{"norm": "t", "trivial": false}]));
}

#[test]
fn decompose_fixtures() {
    let (v, code) = run_json(&["decompose", "--space", &space_arg("h4f2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["m"], 1);
    assert_eq!(v["blocks"][0]["kind"], "interchange");
    assert_eq!(v["valid"], true);

    let (v, _) = run_json(&["decompose", "--space", &space_arg("h4f2_identity.json")]);
    assert_eq!(v["m"], 0);
    assert_eq!(v["W_basis"].as_array().unwrap().len(), 4);

    let (v, _) = run_json(&["decompose", "--space", &space_arg("r4t.json")]);
    let kinds: Vec<&str> = v["blocks"].as_array().unwrap().iter().map(|b| b["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["reflection", "reflection"]);
}

#[test]
fn decompose_rejects_index_three() {
    let (_, code) = run_json(&["decompose", "--space", &space_arg("gf7_eichler.json")]);
    assert_eq!(code, 3);
    let (v, _) = run_json(&["analyze", "--space", &space_arg("gf7_eichler.json")]);
    assert_eq!(v["unipotency_index"], 3);
    assert_eq!((v["symmetric"].as_bool(), v["antisymmetric"].as_bool()), (Some(false), Some(false)));
}

#[test]
fn clifford_reports() {
    let (v, code) = run_json(&["clifford", "--space", &space_arg("h4f2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["transpose_iso"], true);
    assert_eq!(v["pfister"], json!(["1", "1"]));
    assert_eq!(v["involution_type"], "orthogonal");

    let (v, _) = run_json(&["clifford", "--space", &space_arg("r2t.json")]);
    assert_eq!(v["pfister"], json!(["t"]));
    assert_eq!(v["transpose_iso"], false);

    let (v, _) = run_json(&["clifford", "--space", &space_arg("h4f2_identity.json")]);
    assert_eq!(v["involution_type"], "symplectic");

    let (_, code) = run_json(&["clifford", "--space", &space_arg("gf7_eichler.json")]);
    assert_eq!(code, 3);
}

#[test]
fn verify_and_enumerate() {
    let (v, code) = run_json(&["verify", "--theorem", "char", "--space", &space_arg("h4f2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["failed"], 0);
    assert!(v["checked"].as_u64().unwrap() > 0);
    assert_eq!(v["examples"], json!([]));

    let (v, code) = run_json(&["enumerate", "--space", &space_arg("h4f2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 72);

    let out = run(&["verify", "--theorem", "nope", "--space", &space_arg("h4f2.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown theorem"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, r#"{"field": "gf(6)", "dim": 1, "q_upper": [[1]]}"#).unwrap();
    let out = run(&["analyze", "--space", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["analyze", "--space", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wallform"))
        .args(["enumerate", "--space", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"field": "gf(2)", "dim": 2, "q_upper": [[0, 1], [0, 0]]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 2);
}

/// The echoed problem reproduces the same report when fed back in.
#[test]
fn reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for file in ["h4f2.json", "r2t.json", "r4t.json", "gf7_eichler.json"] {
        for cmd in ["analyze", "decompose", "clifford"] {
            let (first, code) = run_json(&[cmd, "--space", &space_arg(file)]);
            if code != 0 {
                continue;
            }
            let echoed = dir.path().join(format!("{cmd}-{file}"));
            std::fs::write(&echoed, serde_json::to_string(&first["problem"]).unwrap()).unwrap();
            let (second, _) = run_json(&[cmd, "--space", echoed.to_str().unwrap()]);
            assert_eq!(first, second, "{cmd} on {file}");
        }
    }
}

#[test]
fn json_keys_sorted() {
    let out = run(&["analyze", "--space", &space_arg("h4f2.json"), "--json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
