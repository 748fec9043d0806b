use std::path::PathBuf;
use std::process::{Command, Output};

const RUNNING: &str = r#"{"target": "o_plus", "n": 2, "L": [[[0, 1], [-1, 0]]], "H": [[0, 0], [0, 0]]}"#;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("qgauss-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn qgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgauss")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_running_spec() {
    let dir = Scratch::new("validate");
    let spec = dir.file("s.json", RUNNING);
    let out = qgauss(&["validate", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true), "{report}");
}

#[test]
fn validate_rejects_with_exit_2() {
    let dir = Scratch::new("reject");
    let spec = dir.file("s.json", r#"{"target": "o_plus", "n": 2, "L": [[[1, 0], [0, 1]]], "H": [[0, 0], [0, 0]]}"#);
    let out = qgauss(&["validate", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["pass"] == false));
}

#[test]
fn eval_running_spec() {
    let dir = Scratch::new("eval");
    let spec = dir.file("s.json", RUNNING);
    let out = qgauss(&["eval", "--spec", &spec, "--expr", "u(1,1) u(2,2)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), serde_json::json!({"value": [-1, 0]}));
}

#[test]
fn parse_index_out_of_range() {
    let out = qgauss(&["parse", "--expr", "u(3,1)", "--target", "u_plus", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
    assert!(out.stdout.is_empty());
}

#[test]
fn parse_prints_canonical_form() {
    let out = qgauss(&["parse", "--expr", "2*u(2,2) + (0,1)*u(1,1)", "--target", "u_plus", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("(0,1)*u(1,1) + 2*u(2,2)"), "{text}");
}

#[test]
fn missing_spec_file_is_exit_1() {
    let out = qgauss(&["validate", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_command_is_exit_1() {
    assert_eq!(qgauss(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn centralize_running_spec() {
    let dir = Scratch::new("centralize");
    let spec = dir.file("s.json", RUNNING);
    let out = qgauss(&["centralize", "--spec", &spec, "--pmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for v in ["-12", "-4"] {
        assert!(text.contains(v), "{text}");
    }
}

#[test]
fn out_flag_writes_same_bytes() {
    let dir = Scratch::new("out");
    let spec = dir.file("s.json", RUNNING);
    let target = dir.0.join("report.json");
    let direct = qgauss(&["moments", "--spec", &spec, "--pmax", "3"]);
    let written = qgauss(&["--out", target.to_str().unwrap(), "moments", "--spec", &spec, "--pmax", "3"]);
    assert_eq!(written.status.code(), Some(0));
    assert_eq!(std::fs::read(&target).unwrap(), direct.stdout);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = Scratch::new("determinism");
    let spec = dir.file("s.json", RUNNING);
    let runs: [&[&str]; 4] = [
        &["central", "--spec", &spec],
        &["cocycle", "--spec", &spec, "--expr", "u(1,2)", "--expr", "u*(2,1) u(1,1)", "--gram"],
        &["conv-exp", "--spec", &spec, "--expr", "u(1,1)", "--t", "0.5", "--order", "4"],
        &["check-group", "--target", "o_plus", "--n", "2", "--samples", "8", "--seed", "11"],
    ];
    for args in runs {
        let (a, b) = (qgauss(args), qgauss(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
