mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use hypfan::cli::{SurfaceFile, SCHEMA};
use serde_json::Value;

fn hypfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypfan")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypfan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn delaunay_reports_flips_and_weak_edges() {
    let t2 = common::path("t2");
    let v = json(&hypfan(&["delaunay", &t2, "--weights", "9,3"]));
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["flip_log"], serde_json::json!([]));
    assert_eq!(v["weak_edges"], serde_json::json!([]));
    let v = json(&hypfan(&["delaunay", &t2, "--weights", "1,1"]));
    assert_eq!(v["weak_edges"], serde_json::json!([0, 1, 2]));
    let v = json(&hypfan(&["delaunay", &t2, "--weights", "3,9"]));
    assert_eq!(v["flip_log"], serde_json::json!([0, 1, 2, 0]));
    // the emitted surface is itself a valid input file
    let s: SurfaceFile = serde_json::from_value(v["surface"].clone()).unwrap();
    s.to_surface().unwrap();
}

#[test]
fn exit_codes() {
    let t2 = common::path("t2");
    assert_eq!(hypfan(&["delaunay", &t2, "--weights", "0,1"]).status.code(), Some(3));
    assert_eq!(hypfan(&["delaunay", &t2, "--weights", "x,1"]).status.code(), Some(2));
    assert_eq!(hypfan(&["delaunay", &t2, "--weights", "1"]).status.code(), Some(2));
    assert_eq!(hypfan(&["delaunay", "/nonexistent.json", "--weights", "1"]).status.code(), Some(2));
    assert_eq!(hypfan(&["polyhedron", &t2, "--tail-tol", "0"]).status.code(), Some(2));
    assert_eq!(hypfan(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hypfan(&["--help"]).status.code(), Some(0));

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"triangles": 2, "pairing": [[0,3],[1,4],[2,5]], "lambda": {"0": "1", "1": "1"}}"#).unwrap();
    let out = hypfan(&["fan", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda.2"));
}

#[test]
fn fan_output_is_deterministic_and_plots() {
    for (name, cones, polygons) in [("t2", 2, 2), ("s3", 4, 4)] {
        let p = common::path(name);
        let a = hypfan(&["fan", &p, "--seed", "3"]);
        let b = hypfan(&["--threads", "1", "fan", &p, "--seed", "3"]);
        assert_eq!(a.stdout, b.stdout);
        let v = json(&a);
        assert_eq!(v["maximal_cones"].as_array().unwrap().len(), cones);
        let file = scratch(&format!("{name}-fan.json"));
        std::fs::write(&file, &a.stdout).unwrap();
        let svg = hypfan(&["plot", file.to_str().unwrap()]);
        assert_eq!(svg.status.code(), Some(0));
        let text = String::from_utf8(svg.stdout).unwrap();
        assert!(text.starts_with("<svg"));
        assert_eq!(text.matches("<polygon").count(), polygons);
    }
}

#[test]
fn polyhedron_passes_and_plots() {
    let out = scratch("t2-poly.json");
    let code = Command::new(env!("CARGO_BIN_EXE_hypfan"))
        .env("HYPFAN_THREADS", "2")
        .args(["polyhedron", &common::path("t2"), "--tail-tol", "1e-5", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(code.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(v["normal_fan"]["passed"], true);
    let svg = scratch("t2-poly.svg");
    let code = hypfan(&["plot", out.to_str().unwrap(), "--out", svg.to_str().unwrap()]).status;
    assert_eq!(code.code(), Some(0));
    assert!(std::fs::read_to_string(svg).unwrap().contains("<polygon"));

    let one = json(&hypfan(&["polyhedron", &common::path("t1")]));
    assert_eq!(one["vertices"].as_array().unwrap().len(), 1);
}

#[test]
fn plot_rejects_four_dimensions() {
    let f = scratch("n4.json");
    std::fs::write(&f, r#"{"schema": "hypfan/1", "kind": "fan", "n": 4, "rays": [[1,0,0,0]], "maximal_cones": []}"#).unwrap();
    assert_eq!(hypfan(&["plot", f.to_str().unwrap()]).status.code(), Some(3));
    std::fs::write(&f, r#"{"schema": "other/2", "kind": "fan"}"#).unwrap();
    assert_eq!(hypfan(&["plot", f.to_str().unwrap()]).status.code(), Some(2));
}
