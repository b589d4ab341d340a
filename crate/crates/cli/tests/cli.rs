use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn veronese(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veronese"))
        .args(args)
        .env("VERONESE_CENSUS_DIR", dir)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("census file")).expect("valid JSON")
}

#[test]
fn classify_reports_point_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let out = veronese(&["classify", "--q", "4", "--format", "json", "1 0 0 0 0 0; 0 1 0 0 0 0; 0 0 0 1 0 1"], dir.path());
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["label"], "Σ10");
    assert_eq!(v["point_od"], serde_json::json!([1, 1, 7, 12]));
    assert_eq!(v["cubic"].as_array().unwrap().len(), 10);
    assert!(v["inflexion_count"].is_null());
}

#[test]
fn classify_accepts_pencil_notation() {
    let dir = tempfile::tempdir().unwrap();
    let out = veronese(&["classify", "--q", "4", "--format", "csv", "x y .; y z .; . . z"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("Σ10"));
}

#[test]
fn representative_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for label in ["S1", "S6", "S12", "S13", "S14'", "S15"] {
        let rep = json_of(&veronese(&["representative", "--q", "4", "--format", "json", "--label", label], dir.path()));
        let plane = rep["plane"].as_str().unwrap();
        let v = json_of(&veronese(&["classify", "--q", "4", "--format", "json", plane], dir.path()));
        assert_eq!(v["label"], rep["label"]);
    }
}

#[test]
fn plane_without_surface_point_is_out_of_scope() {
    let dir = tempfile::tempdir().unwrap();
    let out = veronese(&["classify", "--q", "4", "1 0 2 0 3 3 3 3 1 0 3 0 3 3 0 3 2 1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of scope"));
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(veronese(&["classify", "--q", "4", "garbage"], dir.path()).status.code(), Some(1));
    assert_eq!(veronese(&["classify", "--q", "4", "1 0 0 0 0 0 1 0 0 0 0 0 0 0 1 0 0 0"], dir.path()).status.code(), Some(1));
    assert_eq!(veronese(&["classify", "--q", "6", "x y .; y z .; . . z"], dir.path()).status.code(), Some(1));
    assert_eq!(veronese(&["census", "--q", "16"], dir.path()).status.code(), Some(1));
    assert_eq!(veronese(&["census", "--q", "4", "--group", "sym7"], dir.path()).status.code(), Some(1));
    assert_eq!(veronese(&["verify", "--q", "4", "--check", "nonsense"], dir.path()).status.code(), Some(1));
}

#[test]
fn census_q2_writes_fifteen_orbits() {
    let dir = tempfile::tempdir().unwrap();
    let out = veronese(&["census", "--q", "2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(&dir.path().join("census-q2-pgl3.json"));
    assert_eq!(v["labels"].as_object().unwrap().len(), 15);
    assert_eq!(v["totals"]["planes"], 805);
    assert_eq!(v["labels"]["Σ11"]["count"], 168);
}

#[test]
fn census_q2_sym7_fuses_to_five_classes() {
    let dir = tempfile::tempdir().unwrap();
    let out = veronese(&["census", "--q", "2", "--group", "sym7"], dir.path());
    assert!(out.status.success());
    let v = read_json(&dir.path().join("census-q2-sym7.json"));
    assert_eq!(v["totals"]["orbits"], 5);
    let sizes: u64 = v["labels"].as_object().unwrap().values().map(|c| c["count"].as_u64().unwrap()).sum();
    assert_eq!(sizes, 805);
}

#[test]
fn census_is_independent_of_sharding() {
    let bodies: Vec<Value> = ["1", "8"]
        .iter()
        .map(|shards| {
            let dir = tempfile::tempdir().unwrap();
            let out = veronese(&["census", "--q", "4", "--shards", shards], dir.path());
            assert!(out.status.success());
            let mut v = read_json(&dir.path().join("census-q4-pgl3.json"));
            v.as_object_mut().unwrap().remove("runtime_seconds");
            v
        })
        .collect();
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[0]["totals"]["planes"], 105_133);
}

#[test]
fn verify_passes_at_q4() {
    let dir = tempfile::tempdir().unwrap();
    let out = veronese(
        &["verify", "--q", "4", "--format", "json", "--check", "table1", "--check", "sigma6-hyperplanes", "--check", "solvers"],
        dir.path(),
    );
    assert!(out.status.success());
    let v = json_of(&out);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_trichotomy_at_q8() {
    let dir = tempfile::tempdir().unwrap();
    let out = veronese(&["verify", "--q", "8", "--format", "json", "--check", "inflexion-trichotomy"], dir.path());
    assert!(out.status.success());
    assert_eq!(json_of(&out)["checks"][0]["detail"]["admissible"], 1);
}
