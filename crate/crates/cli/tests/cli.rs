use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use symcont_cli::Report;

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn spec(name: &str) -> String {
    repo().join("specs").join(name).to_string_lossy().into_owned()
}

fn symcont(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcont")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn schema_errors(v: &Value) -> Vec<String> {
    let text = std::fs::read_to_string(repo().join("docs/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator.iter_errors(v).map(|e| format!("{e} at {}", e.instance_path())).collect()
}

fn temp_spec(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("symcont-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn natural_reciprocals_refute_usc_through_half_points() {
    let o = symcont(&["analyze", &spec("natural-reciprocals.json"), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let usc = v["verdicts"].as_array().unwrap().iter().find(|x| x["notion"] == "USC").unwrap();
    assert_eq!(usc["status"], "Refuted");
    let terms = usc["witness"]["terms"].as_array().unwrap();
    assert!(!terms.is_empty());
    for t in terms {
        // (1/n, 0) with centre 1/(2n)
        assert_eq!(t["y"], "0");
        let x = t["x"].as_str().unwrap();
        let n: u64 = x.strip_prefix("1/").expect("x is a unit fraction").parse().unwrap();
        assert_eq!(t["center"], format!("1/{}", 2 * n));
        assert_eq!(t["oscillation"], "1");
    }
}

#[test]
fn constant_has_zero_symmetric_modulus() {
    let o = symcont(&["moduli", &spec("constant.json"), "--notion", "usc", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let entries = v["profiles"][0]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 21);
    assert!(entries.iter().all(|e| e["oscillation"] == "0"));
}

#[test]
fn single_example_and_determinism() {
    let args = ["zoo", "--example", "ex-4.3", "--format", "json"];
    let a = symcont(&args);
    let b = symcont(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["zoo"]["allMatch"], true);
}

#[test]
fn exit_code_matrix() {
    let empty = temp_spec("empty.json", "");
    let unknown_key = temp_spec(
        "unknown.json",
        r#"{"domain": {"IntegerWindow": {"lo": 0, "hi": 2}}, "function": {"Piecewise": []}, "extra": 1}"#,
    );
    let not_subset = temp_spec(
        "subset.json",
        r#"{
  "domain": {"FinitePoints": ["-1", "1/2", "1"]},
  "function": {"Piecewise": [{"region": {"FinitePoints": ["-1", "1/2", "1"]}, "formula": "Identity"}]},
  "subsetB": {"IntegerWindow": {"lo": -1, "hi": 1}}
}"#,
    );
    let bad_number =
        temp_spec("number.json", r#"{"domain": {"FinitePoints": ["1/0"]}, "function": {"Piecewise": []}}"#);
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["analyze".into(), spec("split-interval-step.json")], 0),
        (vec!["analyze".into(), spec("integers-wrt-window.json"), "--verify-witness".into()], 0),
        (vec!["moduli".into(), spec("odd-prime-reciprocals.json"), "--notion".into(), "uc".into()], 0),
        (vec!["zoo".into(), "--example".into(), "ex-2.5".into()], 0),
        // a budget too small to list the set leaves rows unmatched
        (vec!["zoo".into(), "--example".into(), "ex-2.5".into(), "--enum-limit".into(), "10".into()], 1),
        (vec!["analyze".into(), empty], 2),
        (vec!["analyze".into(), unknown_key], 2),
        (vec!["analyze".into(), not_subset.clone()], 2),
        (vec!["analyze".into(), bad_number], 2),
        (vec!["analyze".into(), "/nonexistent/spec.json".into()], 2),
        (vec!["analyze".into(), spec("constant.json"), "--max-pairs".into(), "0".into()], 2),
        (vec!["analyze".into(), spec("constant.json"), "--delta-schedule".into(), "1/4,1/2".into()], 2),
        (vec!["analyze".into(), spec("constant.json"), "--delta-schedule".into(), "half".into()], 2),
        (vec!["zoo".into(), "--example".into(), "ex-9.9".into()], 2),
        (vec!["zoo".into(), "--example".into(), "ex-2.4".into(), "--all".into()], 2),
        (vec!["moduli".into(), spec("constant.json")], 2),
    ];
    for (args, want) in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = symcont(&refs);
        assert_eq!(code(&o), want, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = symcont(&["analyze", &not_subset]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains('0') && err.contains("centre set"), "{err}");
}

#[test]
fn syntax_errors_carry_a_position() {
    let p = temp_spec("broken.json", "{\n  \"domain\": {\"IntegerWindow\": {\"lo\": 0 \"hi\": 2}}\n}");
    let o = symcont(&["analyze", &p]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn reports_match_the_schema_and_round_trip() {
    let runs: Vec<Vec<String>> = vec![
        vec!["analyze".into(), spec("natural-reciprocals.json"), "--verify-witness".into()],
        vec!["analyze".into(), spec("integers-wrt-window.json")],
        vec!["analyze".into(), spec("split-interval-step.json"), "--timing".into()],
        vec!["moduli".into(), spec("odd-prime-reciprocals.json"), "--notion".into(), "usc".into()],
        vec!["zoo".into(), "--example".into(), "ex-3.7".into(), "--verify-witness".into()],
    ];
    for mut args in runs {
        args.extend(["--format".into(), "json".into()]);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = symcont(&refs);
        assert_eq!(code(&o), 0, "{args:?}");
        let v = json(&o);
        let errors = schema_errors(&v);
        assert!(errors.is_empty(), "{args:?}: {errors:#?}");
        let report: Report = serde_json::from_slice(&o.stdout).expect("report deserializes");
        assert_eq!(report.to_json().as_bytes(), o.stdout.as_slice(), "{args:?}");
        for r in &report.witness_checks {
            assert!(r.check.valid, "{}: {:?}", r.subject, r.check.problems);
        }
    }
}

#[test]
fn schema_rejects_a_tampered_report() {
    let o = symcont(&["analyze", &spec("split-interval-step.json"), "--format", "json"]);
    let mut v = json(&o);
    v["verdicts"][1]["witness"]["epsilon"] = Value::from(1.0);
    assert!(!schema_errors(&v).is_empty());
}

#[test]
fn every_proven_verdict_names_its_certificate() {
    let o = symcont(&["zoo", "--all", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["zoo"]["allMatch"], true);
    for row in v["zoo"]["rows"].as_array().unwrap() {
        if row["verdict"]["status"] == "Proven" {
            assert!(row["verdict"]["certificate"]["kind"].is_string(), "{row}");
        }
    }
    assert!(v["zoo"]["relations"].as_array().unwrap().iter().all(|r| r["witnessed"] == true));
}

#[test]
fn sample_spec_matches_the_catalog_entry() {
    let text = std::fs::read_to_string(spec("odd-prime-reciprocals.json")).unwrap();
    let parsed = symcont_cli::parse_spec(&text).unwrap();
    let entry = symcont::zoo::build_example("ex-2.5", 0).unwrap();
    let f = entry.subjects.iter().find(|s| s.label == "f").unwrap();
    assert_eq!(parsed.domain, f.ambient);
    assert_eq!(parsed.function, f.function);
}
