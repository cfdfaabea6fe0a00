use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> PathBuf {
    root().join("data").join(name)
}

fn rpr3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpr3")).args(args).output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = rpr3(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn assert_schema(name: &str, v: &Value) {
    let text = std::fs::read_to_string(root().join("docs/schemas").join(format!("{name}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fk_round_trip_contains_home_pose() {
    let robot = data("ref.json");
    let v = ok_json(&["fk", "--robot", arg(&robot), "--joints", "2.2360679,8.0622577,7.2111025"]);
    assert_schema("fk", &v);
    let home = v.as_array().unwrap().iter().any(|s| {
        s["x"].as_f64().unwrap().abs() < 1e-6 && s["y"].as_f64().unwrap().abs() < 1e-6 && s["phi"].as_f64().unwrap().abs() < 1e-6
    });
    assert!(home, "{v}");
    let oracle = ok_json(&["oracle-fk", "--robot", arg(&robot), "--joints", "2.2360679,8.0622577,7.2111025"]);
    assert_schema("fk", &oracle);
    assert_eq!(oracle.as_array().unwrap().len(), v.as_array().unwrap().len());
}

#[test]
fn ik_and_classify() {
    let robot = data("ref.json");
    let v = ok_json(&["ik", "--robot", arg(&robot), "--pose", "0,0,0", "--signs", "-1,1,1"]);
    assert_schema("ik", &v);
    assert!((v["rho"][0].as_f64().unwrap() + 5f64.sqrt()).abs() < 1e-12);
    let c = ok_json(&["classify", "--robot", arg(&robot), "--pose", "2,1,0"]);
    assert_schema("classify", &c);
    assert_eq!(c["kind"], "serial_singular");
    assert_eq!(c["singular_legs"], serde_json::json!([1]));
}

#[test]
fn usage_errors_exit_two() {
    let robot = data("ref.json");
    assert_eq!(rpr3(&["fk", "--robot", arg(&robot), "--bogus"]).status.code(), Some(2));
    assert_eq!(rpr3(&["fk", "--robot", arg(&robot), "--joints", "1,2"]).status.code(), Some(2));
    assert_eq!(rpr3(&["teleport"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let out = rpr3(&["fk", "--robot", "/nonexistent/robot.json", "--joints", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("two.json");
    std::fs::write(&bad, r#"{"base": [[0, 0], [10, 0]], "platform": [[-2, -1], [2, -1], [0, 2]]}"#).unwrap();
    assert_eq!(rpr3(&["design-check", "--robot", arg(&bad)]).status.code(), Some(1));
}

#[test]
fn locus_outputs() {
    let robot = data("ref.json");
    let args = ["locus", "--robot", arg(&robot), "--phi", "0.4", "--window", "-10,-10,20,20", "--step", "0.5"];
    let v = ok_json(&[&args[..], &["--out", "json"]].concat());
    assert_schema("locus", &v);
    assert!(!v["polylines"].as_array().unwrap().is_empty());
    let out = rpr3(&[&args[..], &["--out", "csv"]].concat());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,polyline_id"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(row.len(), 3);
}

#[test]
fn design_check_reports() {
    let v = ok_json(&["design-check", "--robot", arg(&data("ref.json"))]);
    assert_schema("design-check", &v);
    assert_eq!(v["architectural"], false);
    assert_eq!(v["passage_safety"], serde_json::json!([true, true, true]));
    let out = rpr3(&["design-check", "--robot", arg(&data("similar.json"))]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("architectural singularity"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_schema("design-check", &v);
    assert_eq!(v["architectural"], true);
    assert_eq!(v["similarity"], "direct");
}

#[test]
fn plan_then_verify() {
    let robot = data("ref.json");
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("path.json");
    let summary = ok_json(&["plan", "--robot", arg(&robot), "--start", "0,0,0", "--out", arg(&file)]);
    assert_schema("plan-summary", &summary);
    assert_eq!(summary["verdict"], "changed_without_parallel");
    let path: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_schema("path", &path);

    let cert = ok_json(&["verify", "--robot", arg(&robot), "--path", arg(&file)]);
    assert_schema("certificate", &cert);
    assert_eq!(cert["verdict"], "changed_without_parallel");
    let kinds: Vec<&str> = cert["events"].as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"passage") && !kinds.contains(&"parallel"), "{kinds:?}");

    let out = rpr3(&["verify", "--robot", arg(&robot), "--path", arg(&file), "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,measure,rho1,rho2,rho3\n"));
    assert_eq!(text.lines().count(), cert["joint_path"]["t"].as_array().unwrap().len() + 1);
}

#[test]
fn verify_flags_a_parallel_crossing() {
    let cert = ok_json(&["verify", "--robot", arg(&data("ref.json")), "--path", arg(&data("contrast_path.json"))]);
    assert_schema("certificate", &cert);
    assert_ne!(cert["verdict"], "changed_without_parallel");
    let events = cert["events"].as_array().unwrap();
    assert_eq!(events.len(), 1);
    assert_eq!(events[0]["kind"], "parallel");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let robot = data("ref.json");
    let args = ["--seed", "11", "plan", "--robot", arg(&robot), "--start", "0,0,0"];
    let a = rpr3(&args);
    let b = rpr3(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["--seed", "11", "locus", "--robot", arg(&robot), "--phi", "1", "--window", "-10,-10,20,20", "--step", "1"];
    assert_eq!(rpr3(&args).stdout, rpr3(&args).stdout);
}

#[test]
fn robot_files_match_their_schema() {
    for name in ["ref.json", "similar.json"] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
        assert_schema("robot", &v);
    }
}
