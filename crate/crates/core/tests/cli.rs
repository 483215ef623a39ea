//! End-to-end runs of the `tjk` binary.

use std::io::Write;
use std::process::Command;

use serde_json::Value;

fn tjk(args: &[&str]) -> (i32, String, String) {
    tjk_env(args, None)
}

fn tjk_env(args: &[&str], field: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tjk"));
    cmd.args(args).env_remove("TJK_FIELD");
    if let Some(f) = field {
        cmd.env("TJK_FIELD", f);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, out, err) = tjk(&all);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn rep_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn normalize() {
    assert_eq!(tjk(&["normalize", "x*y"]).1.trim(), "1");
    assert_eq!(tjk(&["normalize", "(1-y*x)^2"]).1.trim(), "1 - y*x");
    assert_eq!(tjk(&["normalize", "x^2*y"]).1.trim(), "x");
    let v = json(&["normalize", "3*y*x^2 - 1/2"]);
    assert_eq!(v["normal_form"], "-1/2 + 3*y*x^2");
    assert_eq!(v["terms"], serde_json::json!([[0, 0, "-1/2"], [1, 2, "3"]]));
    let (code, _, err) = tjk(&["normalize", "x^-1"]);
    assert_eq!(code, 1);
    assert!(err.contains("offset 2"), "{err}");
}

#[test]
fn ideal_reports() {
    let v = json(&["ideal", "x^2"]);
    assert_eq!(v["p"], serde_json::json!(["0", "0", "1"]));
    assert_eq!(v["L"], serde_json::json!([]));
    let v = json(&["ideal", "1-y*x"]);
    assert_eq!(v["p"], serde_json::json!([]));
    assert_eq!(v["L"], serde_json::json!([["1"]]));
    assert_eq!(v["semisimple"], true);
    let v = json(&["ideal", "x - 1", "x^2 - 1"]);
    assert_eq!(v["p"], serde_json::json!(["-1", "1"]));
    // x(y + 2) = 1 + 2x and f_1(y + 2) = 2 f_1
    let v = json(&["ideal", "y + 2"]);
    assert_eq!(v["p"], serde_json::json!(["1/2", "1"]));
    assert_eq!(v["L"], serde_json::json!([["1"]]));
    assert_eq!(v["unit"], false);
    assert_eq!(json(&["ideal", "x - 1", "x + 1"])["unit"], true);
    assert_eq!(json(&["member", "x^3 - x^2", "x - 1"])["member"], true);
    assert_eq!(json(&["member", "x", "x - 1"])["member"], false);
}

#[test]
fn ext_and_hom() {
    assert_eq!(json(&["ext", "Lp:x-1", "S1^1"])["dimension"], 1);
    assert_eq!(json(&["ext", "S1^2", "Lp:x-1"])["dimension"], 0);
    let v = json(&["--verify", "ext", "Lp:x^2+x+1", "S1^2", "--formula", "ii"]);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["agree"], true);
    assert_eq!(json(&["hom", "S1", "S1"])["dimension"], 1);
    assert_eq!(json(&["hom", "Lp:x-1", "S1"])["dimension"], 0);
    let (code, _, _) = tjk(&["ext", "Lp:x-1", "S1", "--formula", "iii"]);
    assert_eq!(code, 1, "formula (iii) needs a finite-dimensional target");
    let (code, _, _) = tjk(&["ext", "nonsense", "S1"]);
    assert_eq!(code, 1);
}

#[test]
fn rep_files() {
    let m = rep_file(r#"{"field":"Q","dim_u":1,"dim_v":2,"E":["1","0"],"F":["1","0","0","1"]}"#);
    let path = m.path().to_str().unwrap();
    let v = json(&["--verify", "ext", path, "S1^1"]);
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["oracle"], 1);
    assert_eq!(v["agree"], true);

    let singular = rep_file(r#"{"field":"Q","dim_u":0,"dim_v":1,"E":[],"F":["0"]}"#);
    let (code, _, err) = tjk(&["functor", singular.path().to_str().unwrap(), "--roundtrip"]);
    assert_eq!(code, 1, "{err}");

    let wrong_field = rep_file(r#"{"field":"Fp:5","dim_u":0,"dim_v":1,"E":[],"F":["2"]}"#);
    let (code, _, _) = tjk(&["functor", wrong_field.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let (code, _, _) = tjk(&["--field", "Fp:5", "functor", wrong_field.path().to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn functor_round_trips() {
    for spec in ["S1", "Lp:x^2+x+1", "S1^2"] {
        let v = json(&["functor", spec, "--roundtrip"]);
        assert_eq!(v["isomorphic"], true, "{spec}: {v}");
    }
}

#[test]
fn field_from_environment() {
    let (_, over_q, _) = tjk_env(&["normalize", "5*x + 1/2"], None);
    assert_eq!(over_q.trim(), "1/2 + 5*x");
    let (code, over_f5, _) = tjk_env(&["normalize", "5*x + 1/2"], Some("Fp:5"));
    assert_eq!(code, 0);
    assert_eq!(over_f5.trim(), "3");
    // the flag wins over the environment
    let (_, flagged, _) = tjk_env(&["--field", "Q", "normalize", "5*x"], Some("Fp:5"));
    assert_eq!(flagged.trim(), "5*x");
    let (code, _, _) = tjk_env(&["normalize", "x"], Some("Fp:6"));
    assert_eq!(code, 1);
}

#[test]
fn deterministic_output() {
    let args = ["--json", "--verify", "ext", "Lp:x^2-1", "S1^2", "--formula", "iv"];
    assert_eq!(tjk(&args), tjk(&args));
    assert_eq!(tjk(&["selftest"]), tjk(&["selftest"]));
}

#[test]
fn selftest_exit_codes() {
    let (code, out, _) = tjk(&["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS"));
    assert_eq!(tjk(&["--field", "Fp:5", "selftest"]).0, 0);
    let (code, out, _) = tjk(&["--budget", "0", "selftest"]);
    assert_eq!(code, 2, "{out}");
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn budget_exhaustion_is_exit_two() {
    assert_eq!(tjk(&["--budget", "0", "ideal", "x^2 + y"]).0, 2);
}
