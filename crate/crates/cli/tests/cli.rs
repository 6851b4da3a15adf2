use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use sixvertex::oracles::{boundary_json, params_json, Sampler};
use tempfile::TempDir;

fn sixvertex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sixvertex")).args(args).output().expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, config: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path
}

fn worked() -> Value {
    json!({
        "c": "1",
        "u": ["2"],
        "v": [0],
        "boundary": {"w": ["1", "1"], "e": ["1", "0"], "n": ["1", "3"], "s": ["1", "2"]}
    })
}

fn compute(path: &Path, extra: &[&str]) -> (Option<i32>, Value, String) {
    let mut args = vec!["compute", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = sixvertex(&args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code(), value, String::from_utf8(out.stderr).unwrap())
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn worked_example_all_methods_give_18() {
    let dir = TempDir::new().unwrap();
    let path = write_config(&dir, "worked.json", &worked());
    let (code, result, _) = compute(&path, &[]);
    assert_eq!(code, Some(0));
    assert_eq!(result["agreement"], json!(true));
    let values = result["values"].as_object().unwrap();
    assert_eq!(values.len(), 7);
    for (method, v) in values {
        assert_eq!(v, &json!({"re": "18", "im": "0"}), "{method}");
    }
}

#[test]
fn float_mode_and_single_method() {
    let dir = TempDir::new().unwrap();
    let path = write_config(&dir, "worked.json", &worked());
    let (code, result, _) = compute(&path, &["--mode", "float", "--method", "det-u"]);
    assert_eq!(code, Some(0));
    assert_eq!(result["mode"], json!("float"));
    assert_eq!(result["values"], json!({"det-u": {"re": "18", "im": "0"}}));
}

#[test]
fn domain_wall_single_vertex_is_one() {
    let dir = TempDir::new().unwrap();
    let config = json!({
        "c": "1/3",
        "u": [{"re": "5", "im": "2"}],
        "v": ["-1/2"],
        "boundary": {"w": [1, 0], "e": [0, 1], "n": [1, 0], "s": [0, 1]},
        "method": "all"
    });
    let path = write_config(&dir, "dw.json", &config);
    let (code, result, _) = compute(&path, &[]);
    assert_eq!(code, Some(0));
    for v in result["values"].as_object().unwrap().values() {
        assert_eq!(v, &json!({"re": "1", "im": "0"}));
    }
}

#[test]
fn coinciding_rapidities_exit_3() {
    let dir = TempDir::new().unwrap();
    let mut config = worked();
    config["u"] = json!(["0"]);
    let path = write_config(&dir, "bad.json", &config);
    let (code, _, err) = compute(&path, &[]);
    assert_eq!(code, Some(3));
    assert!(err.contains("lambda2 singular"), "{err}");
}

#[test]
fn zero_boundary_vector_exit_3() {
    let dir = TempDir::new().unwrap();
    let mut config = worked();
    config["boundary"]["s"] = json!(["0", "0"]);
    let path = write_config(&dir, "zero.json", &config);
    let (code, _, err) = compute(&path, &[]);
    assert_eq!(code, Some(3));
    assert!(err.contains("zero boundary vector s"), "{err}");
}

#[test]
fn unknown_key_exit_1_with_pointer() {
    let dir = TempDir::new().unwrap();
    let mut config = worked();
    config["boundary"]["west"] = json!(["1", "0"]);
    let path = write_config(&dir, "unknown.json", &config);
    let (code, _, err) = compute(&path, &[]);
    assert_eq!(code, Some(1));
    assert!(err.contains("unknown field `west`"), "{err}");
    assert!(err.contains("unknown.json:") && err.contains('^'), "{err}");
}

#[test]
fn malformed_literal_exit_1() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"c\": \"1/0x\",\n  \"u\": []\n}").unwrap();
    let (code, _, err) = compute(&path, &[]);
    assert_eq!(code, Some(1));
    assert!(err.contains("broken.json:2:"), "{err}");
}

#[test]
fn rectangular_lattice_skips_cramer() {
    let dir = TempDir::new().unwrap();
    let mut config = worked();
    config["u"] = json!(["2", "7/2"]);
    let path = write_config(&dir, "rect.json", &config);
    let (code, result, _) = compute(&path, &[]);
    assert_eq!(code, Some(0));
    assert!(result["skipped"]["cramer"].is_string());
    assert_eq!(result["values"].as_object().unwrap().len(), 6);

    let (code, _, err) = compute(&path, &["--method", "cramer"]);
    assert_eq!(code, Some(1));
    assert!(err.contains("square"), "{err}");
}

#[test]
fn output_file_values_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let path = write_config(&dir, "worked.json", &worked());
    let read = |name: &str| -> Value {
        let out = dir.path().join(name);
        let (code, _, _) = compute(&path, &["-o", out.to_str().unwrap()]);
        assert_eq!(code, Some(0));
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap()
    };
    let (first, second) = (read("a.json"), read("b.json"));
    for key in ["values", "agreement", "input", "skipped", "m", "n", "mode"] {
        assert_eq!(first[key], second[key], "{key}");
    }
}

#[test]
fn random_generic_configs_agree() {
    let dir = TempDir::new().unwrap();
    for index in 0..6u64 {
        let mut s = Sampler::new(5, index);
        let (m, n) = (s.size(0, 3), s.size(0, 3));
        let p = params_json(&s.params(m, n));
        let config = json!({"c": p["c"], "u": p["u"], "v": p["v"], "boundary": boundary_json(&s.boundary(true))});
        let path = write_config(&dir, &format!("job{index}.json"), &config);
        let (code, result, err) = compute(&path, &[]);
        assert_eq!(code, Some(0), "instance {index}: {err}");
        assert_eq!(result["agreement"], json!(true));
    }
}

fn verify(args: &[&str]) -> (Option<i32>, Vec<Value>) {
    let mut all = vec!["verify"];
    all.extend_from_slice(args);
    let out = sixvertex(&all);
    let lines = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is one report"))
        .collect();
    (out.status.code(), lines)
}

#[test]
fn verify_ybe() {
    let (code, reports) = verify(&["--suite", "ybe", "--seed", "1"]);
    assert_eq!(code, Some(0));
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["status"] == json!("pass")));
}

#[test]
fn verify_full_equivalence() {
    let (code, reports) = verify(&["--suite", "full_equivalence", "--max-size", "3"]);
    assert_eq!(code, Some(0));
    assert!(reports.iter().all(|r| r["status"] != json!("fail")));
}

#[test]
fn verify_offshell() {
    let (code, reports) = verify(&["--suite", "offshell"]);
    assert_eq!(code, Some(0));
    assert!(reports.iter().any(|r| r["check_name"].as_str().unwrap().contains("offshell_d")));
}

#[test]
fn verify_rejects_bad_requests() {
    let out = sixvertex(&["verify", "--suite", "nonsense"]);
    assert!(!out.status.success());
    let (code, _) = verify(&["--suite", "ybe", "--max-size", "999"]);
    assert_eq!(code, Some(1));
}

fn bench(args: &[&str]) -> (Option<i32>, Vec<String>, String) {
    let mut all = vec!["bench"];
    all.extend_from_slice(args);
    let out = sixvertex(&all);
    let rows = String::from_utf8(out.stdout.clone()).unwrap().lines().map(str::to_string).collect();
    (out.status.code(), rows, stderr(&out))
}

#[test]
fn bench_csv_shape() {
    let (code, rows, _) = bench(&["--sizes", "2..4", "--methods", "det-v,contraction-expectation"]);
    assert_eq!(code, Some(0));
    assert_eq!(rows[0], "n,m,method,mode,wall_ms,value_digest");
    assert_eq!(rows.len(), 1 + 3 * 2);
    for pair in rows[1..].chunks(2) {
        let a: Vec<&str> = pair[0].split(',').collect();
        let b: Vec<&str> = pair[1].split(',').collect();
        assert_eq!((a[2], b[2], a[3]), ("det-v", "contraction-expectation", "exact"));
        assert!(a[4].parse::<f64>().is_ok());
        assert_eq!(a[5], b[5], "both methods give the same value");
    }
}

#[test]
fn bench_float_digest_matches_exact() {
    let (_, exact, _) = bench(&["--sizes", "3", "--methods", "det-v"]);
    let (code, float, _) = bench(&["--sizes", "3", "--methods", "det-v", "--mode", "float"]);
    assert_eq!(code, Some(0));
    assert_eq!(exact[1].rsplit(',').next(), float[1].rsplit(',').next());
}

#[test]
fn bench_large_float_det() {
    let (code, rows, _) = bench(&["--sizes", "200", "--methods", "det-v", "--mode", "float"]);
    assert_eq!(code, Some(0));
    assert!(rows[1].starts_with("200,200,det-v,float,"));
}

#[test]
fn bench_invalid_requests_exit_1() {
    let (code, rows, err) = bench(&["--sizes", "", "--methods", "det-v"]);
    assert_eq!(code, Some(1));
    assert!(rows.is_empty() && err.contains("empty"), "{err}");
    let (code, _, err) = bench(&["--sizes", "12..13", "--methods", "contraction-trace"]);
    assert_eq!(code, Some(1));
    assert!(err.contains("ceiling"), "{err}");
    let (code, _, _) = bench(&["--sizes", "2", "--methods", "fastest"]);
    assert_eq!(code, Some(1));
}
