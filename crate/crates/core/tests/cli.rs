use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const THREE_POINT: &str = r#"{
    "mode": "rational",
    "metric": "table",
    "points": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
    "table": [["0", "1", "5/4"], ["1", "0", "1/2"], ["5/4", "1/2", "0"]],
    "map": {"table": {"a": ["b"], "b": ["c"], "c": ["c"]}},
    "gauge": {"kind": "constant", "value": "1/2"},
    "solver": {"x0": "a", "tol": "0"}
}"#;

const SWAP: &str = r#"{
    "mode": "rational",
    "metric": "table",
    "points": [{"id": "a"}, {"id": "b"}],
    "table": [["0", "1"], ["1", "0"]],
    "map": {"table": {"a": ["b"], "b": ["a"]}},
    "gauge": {"kind": "constant", "value": "99/100"},
    "solver": {"x0": "a", "tol": "0"}
}"#;

const PLANE: &str = r#"{
    "mode": "rational",
    "metric": "euclidean",
    "points": [{"id": "o", "coords": [0, 0]}, {"id": "p", "coords": [1, 1]}, {"id": "q", "coords": ["1/2", 0]}],
    "sets": {"A": {"set": ["o", "q"]}, "B": {"set": ["p"]}}
}"#;

fn hausfix(args: &[&str]) -> Output {
    hausfix_env(args, None)
}

fn hausfix_env(args: &[&str], tolerance: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hausfix"));
    cmd.args(args).env_remove("HAUSFIX_FLOAT_TOLERANCE");
    if let Some(t) = tolerance {
        cmd.env("HAUSFIX_FLOAT_TOLERANCE", t);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn iterate_reaches_fixed_point() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "three.json", THREE_POINT);
    let out = hausfix(&["iterate", "--file", &file]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "FixedPoint c, 2 steps");
    assert!(stderr(&out).is_empty());

    let at_c = write(&dir, "at_c.json", &THREE_POINT.replace(r#""x0": "a""#, r#""x0": "c""#));
    let out = hausfix(&["iterate", "--file", &at_c]);
    assert_eq!(stdout(&out).trim(), "FixedPoint c, 0 steps");
}

#[test]
fn iterate_writes_trace_csv() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "three.json", THREE_POINT);
    let csv = dir.path().join("trace.csv");
    let out = hausfix(&["iterate", "--file", &file, "--trace-out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,point_id,step_distance,image_distance,beta_value");
    assert_eq!(lines[1], "0,a,,1,");
    assert_eq!(lines[2], "1,b,1,1/2,3/4");
    assert_eq!(lines[3], "2,c,1/2,0,3/4");
}

#[test]
fn iteration_cap_exits_three() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "three.json", THREE_POINT);
    let out = hausfix(&["iterate", "--file", &file, "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("MaxIterExceeded"));
    assert!(stderr(&out).contains("iteration cap"));
}

#[test]
fn non_contractive_map_exits_four() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "swap.json", SWAP);
    let out = hausfix(&["iterate", "--file", &file]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).starts_with("BoundViolation at step 2"), "{}", stdout(&out));
}

#[test]
fn invalid_input_exits_two_on_stderr() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", &THREE_POINT.replace(r#""b": ["c"]"#, r#""b": ["zz"]"#));
    let out = hausfix(&["iterate", "--file", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("map.table.b"), "{}", stderr(&out));

    let out = hausfix(&["iterate", "--file", &write(&dir, "junk.json", "{ not json")]);
    assert_eq!(out.status.code(), Some(2));

    let out = hausfix(&["iterate", "--file", &write(&dir, "tol.json", THREE_POINT), "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(hausfix(&["no-such-command"]).status.code(), Some(2));
    let help = hausfix(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("verify-example"));
}

#[test]
fn hausdorff_prints_exact_and_irrational_values() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "plane.json", PLANE);
    let out = hausfix(&["hausdorff", "--file", &file, "--a", "A", "--b", "B"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).trim().starts_with("1.41421356"), "{}", stdout(&out));

    let out = hausfix(&["hausdorff", "--file", &file, "--a", "o", "--b", "q,o"]);
    assert_eq!(stdout(&out).trim(), "1/2");
}

#[test]
fn exported_example_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("example.json");
    let path = path.to_str().unwrap();
    assert_eq!(hausfix(&["export-example", "--depth", "6", "--out", path]).status.code(), Some(0));
    assert!(Path::new(path).exists());
    let out = hausfix(&["hausdorff", "--file", path, "--a", "Tx3", "--b", "Tx1"]);
    assert_eq!(stdout(&out).trim(), "1/4", "{}", stderr(&out));
    let out = hausfix(&["iterate", "--file", path]);
    assert_eq!(stdout(&out).trim(), "FixedPoint x6, 5 steps");
    let out = hausfix(&["nadler-constant", "--file", path]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn verify_example_reports() {
    let out = hausfix(&["verify-example", "--depth", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("d(x_m, x_n) = tau_n") && text.contains("PASS"));
    assert!(text.contains("class S: PASS"));

    let out = hausfix(&["verify-example", "--depth", "200", "--nadler-r", "0.9"]);
    let text = stdout(&out);
    assert!(text.contains("Nadler r = 9/10: violated, first index 7"), "{text}");
    assert!(text.contains("FAIL-MT"));

    let out = hausfix(&["verify-example", "--depth", "8", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["distances"]["verdict"], "PASS");

    assert_eq!(hausfix(&["verify-example", "--depth", "2"]).status.code(), Some(2));
}

#[test]
fn check_gauge_verdicts() {
    let ratio = r#"{"kind": "rule", "name": "t_over_1_plus_t", "params": {"scale": "1"}}"#;
    let out = hausfix(&["check-gauge", "--gauge", ratio, "--probe-range", "1..100"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("class S: FAIL"), "{text}");
    assert!(text.contains("PASS-MT"), "{text}");

    let out = hausfix(&["check-gauge", "--example-gauge", "200"]);
    let text = stdout(&out);
    assert!(text.contains("class S: PASS") && text.contains("FAIL-MT"), "{text}");

    let out = hausfix(&["check-gauge", "--gauge", r#"{"kind": "constant", "value": 0.5}"#, "--mode", "float", "--probes", "0.1,1,2", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["mizoguchi_takahashi"]["verdict"], "PASS-MT");

    let out = hausfix(&["check-gauge", "--gauge", r#"{"kind": "constant", "value": 1}"#, "--probes", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn float_tolerance_from_environment() {
    let dir = TempDir::new().unwrap();
    // The second move overshoots the bound 1/2 by 1e-8.
    let near = r#"{
        "mode": "float",
        "metric": "table",
        "points": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        "table": [[0, 1, 1.2], [1, 0, 0.50000001], [1.2, 0.50000001, 0]],
        "map": {"table": {"a": ["b"], "b": ["c"], "c": ["c"]}},
        "gauge": {"kind": "constant", "value": 0},
        "solver": {"x0": "a", "tol": 1e-12}
    }"#;
    let file = write(&dir, "near.json", near);
    let args = ["iterate", "--file", &file];
    assert_eq!(hausfix_env(&args, None).status.code(), Some(4));
    let out = hausfix_env(&args, Some("1e-6"));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "FixedPoint c, 2 steps");
    let out = hausfix_env(&args, Some("not-a-number"));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("HAUSFIX_FLOAT_TOLERANCE"));
}
