use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use nbhd_core::algebra::FiniteModalAlgebra;
use nbhd_core::frames::NeighborhoodFrame;
use nbhd_core::semantics::{ModelCheck, PropositionalModel};
use nbhd_core::syntax::parse;
use serde_json::Value;

fn nbhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbhd")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nbhd-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn decide_monotonicity_axiom() {
    let out = nbhd(&["decide", "([](p & q) -> ([]p & []q))", "--class", "m"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "valid");
    assert!(v["countermodel"].is_null());
}

#[test]
fn decide_necessitation_in_the_minimal_class() {
    let out = nbhd(&["decide", "[]T", "--class", ""]);
    let v = json(&out);
    assert_eq!(v["status"], "invalid");
    assert_eq!(v["countermodel"]["nbhd"], serde_json::json!([[]]));
    let model: PropositionalModel = serde_json::from_value(v["countermodel"].clone()).unwrap();
    assert!(!model.model_valid(&parse("[]T").unwrap()).unwrap());
}

#[test]
fn countermodel_verb() {
    let out = nbhd(&["countermodel", "[](p & q) -> []p", "--class", "t,c", "--max-worlds", "2"]);
    let v = json(&out);
    assert_eq!(v["found"], true);
    let model: PropositionalModel = serde_json::from_value(v["countermodel"].clone()).unwrap();
    assert_eq!(model.frame.world_count(), 2);
    let none = json(&nbhd(&["countermodel", "[](p & q) -> []p", "--class", "m", "--max-worlds", "3"]));
    assert_eq!(none["found"], false);
}

#[test]
fn bound_override() {
    let f = "[]a & []b & [](a & b) -> c";
    let out = nbhd(&["decide", f, "--class", ""]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "resource");
    let out = nbhd(&["decide", f, "--class", "", "--bound", "6"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn barcan_demos() {
    let v = json(&nbhd(&["bf-demo"]));
    assert_eq!(v["premise"], "holds");
    assert_eq!(v["conclusion"], "fails");
    for flag in ["monotonic", "topped", "cufi"] {
        assert_eq!(v["frame_flags"][flag], true);
    }
    let out = nbhd(&["omega-bf-demo", "--sequential"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["premise"], "holds");
    assert_eq!(v["conclusion"], "fails");
    assert!(v["finite_contrast"].as_array().unwrap().iter().all(|r| r["valid"] == true));
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(nbhd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nbhd(&["decide", "[]p", "--class", "q"]).status.code(), Some(2));
    assert_eq!(nbhd(&["dualize", "x.json"]).status.code(), Some(2));

    let out = nbhd(&["decide", "(p & )", "--class", "m"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!(v["error"]["position"], 5);
    assert!(!out.stderr.is_empty());

    let bad = scratch("bad-algebra.json", r#"{"atoms": 1, "box": [0, 7]}"#);
    let out = nbhd(&["check-algebra", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "json");

    let out = nbhd(&["check-frame", "/nonexistent/frame.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "io");
}

#[test]
fn duality_round_trip_through_files() {
    let algebra = r#"{"atoms": 2, "box": [0, 1, 0, 3]}"#;
    let a_path = scratch("algebra.json", algebra);
    let frame_out = nbhd(&["dualize", "--jbar", a_path.to_str().unwrap()]);
    assert_eq!(frame_out.status.code(), Some(0));
    let frame: NeighborhoodFrame = serde_json::from_slice(&frame_out.stdout).unwrap();
    let f_path = scratch("frame.json", &String::from_utf8_lossy(&frame_out.stdout));

    let checked = json(&nbhd(&["check-frame", f_path.to_str().unwrap()]));
    assert_eq!(checked["worlds"], frame.world_count());

    let k_out = nbhd(&["dualize", "--k", f_path.to_str().unwrap()]);
    let back: FiniteModalAlgebra = serde_json::from_slice(&k_out.stdout).unwrap();
    let original: FiniteModalAlgebra = serde_json::from_str(algebra).unwrap();
    assert_eq!(back, original);

    let report = json(&nbhd(&["check-algebra", a_path.to_str().unwrap()]));
    assert_eq!(report["prime_filters"].as_array().unwrap().len(), 2);
}

#[test]
fn represent_reports_an_embedding() {
    let a_path = scratch("mono.json", r#"{"atoms": 2, "box": [0, 1, 2, 3]}"#);
    let m_path = scratch("meets.json", "[[1, 3], [2, 3], []]");
    let v = json(&nbhd(&["represent", a_path.to_str().unwrap(), "--meets", m_path.to_str().unwrap()]));
    for flag in ["injective", "boolean_homomorphism", "box_preserved", "meets_preserved"] {
        assert_eq!(v[flag], true, "{flag}");
    }
    assert_eq!(v["variant"], "j");

    let nonmono = scratch("nonmono.json", r#"{"atoms": 1, "box": [1, 0]}"#);
    let out = nbhd(&["represent", nonmono.to_str().unwrap(), "--meets", m_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = nbhd(&["represent", nonmono.to_str().unwrap(), "--meets", scratch("none.json", "[]").to_str().unwrap(), "--jbar"]);
    assert_eq!(json(&out)["variant"], "jbar");
}

#[test]
fn model_existence_from_a_file() {
    let path = scratch("formulas.txt", "# corpus\n[](p & q) -> []p\n\n[]T\n");
    let out = nbhd(&["model-existence", "--formulas", path.to_str().unwrap(), "--class", "t"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    for c in checks {
        assert_eq!(c["provable"], c["model_validates"]);
    }
    assert_eq!(checks[1]["provable"], true);
    let model: PropositionalModel = serde_json::from_value(v["model"].clone()).unwrap();
    assert!(model.frame.properties().topped);
}

#[test]
fn parse_from_stdin_with_envelope() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nbhd"))
        .args(["--envelope", "parse", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"A x. [] P(x) -> <> Q(x, y)").unwrap();
    let out = child.wait_with_output().unwrap();
    let v = json(&out);
    assert_eq!(v["command"], "parse");
    assert_eq!(v["exit_code"], 0);
    // the quantifier binds tightly, so the consequent's x is free
    assert_eq!(v["result"]["free_vars"], serde_json::json!(["x", "y"]));
    let printed = v["result"]["formula"].as_str().unwrap();
    let ast: nbhd_core::Formula = serde_json::from_value(v["result"]["ast"].clone()).unwrap();
    assert_eq!(parse(printed).unwrap(), ast);
}

#[test]
fn selftest_exit_code() {
    let out = Command::new(env!("CARGO_BIN_EXE_nbhd"))
        .args(["selftest"])
        .env("NBHD_DUALITY_JOBS", "2")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["suites"].as_array().unwrap().len(), 10);
}
