use std::process::{Command, Output};

use serde_json::Value;

fn mintime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mintime"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = mintime(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn eval_reports_exact_time_in_the_hole() {
    let doc = json(&["eval", "--fixture", "box-complement", "--point", "1/2,1/2"]);
    assert_eq!(doc["results"][0]["time"]["exact"], "1/2");
    assert_eq!(doc["results"][0]["in_target"], false);
}

#[test]
fn eval_reports_infinite_time_above_the_strip() {
    let doc = json(&["eval", "--fixture", "strip-box", "--point", "0,2"]);
    assert_eq!(doc["results"][0]["time"]["exact"], "inf");
}

#[test]
fn projection_of_the_hole_point_is_a_single_vertex() {
    let doc = json(&["project", "--fixture", "box-complement-hole"]);
    assert_eq!(doc["results"][0]["vertices"], serde_json::json!([["1", "1/2"]]));
}

#[test]
fn basic_subdifferential_in_the_hole_is_a_point() {
    let doc = json(&["subdiff", "--fixture", "box-complement-hole", "--which", "basic"]);
    let sd = &doc["results"][0]["subdifferential"];
    assert_eq!(sd["source"], "projection: U -d rho(w-x) ∩ N(w;Omega)");
    assert_eq!(sd["set"]["pieces"][0]["vertices"], serde_json::json!([["-1", "0"]]));
}

#[test]
fn singular_subdifferential_on_the_strip_is_not_trivial() {
    let doc = json(&["subdiff", "--fixture", "strip-box", "--point", "0,1", "--which", "singular"]);
    assert_eq!(doc["results"][0]["subdifferential"]["origin_only"], false);
}

#[test]
fn enlargement_of_the_strip_box_widens_it() {
    let doc = json(&["enlarge", "--fixture", "strip-box", "--r", "1/2"]);
    let verts = doc["enlargement"]["pieces"][0]["vertices"].as_array().unwrap();
    assert!(verts.iter().any(|v| v[0] == "3/2"));
}

#[test]
fn verify_passes_on_goldens_and_sets_the_exit_code() {
    let doc = json(&["verify", "--fixture", "box-complement", "--suite", "goldens"]);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["counts"]["fail"], 0);
    let out = mintime(&["verify", "--fixture", "box-complement", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scene_files_round_trip_through_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = mintime(&["fixture", "export", "--dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let path = dir.path().join("strip-box.json");
    let doc = json(&["eval", "--scene", path.to_str().unwrap(), "--point", "2,1/2"]);
    assert_eq!(doc["results"][0]["time"]["exact"], "1");
}

#[test]
fn plot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let args = |p: &std::path::Path| {
        vec!["plot", "--fixture", "box-complement", "--resolution", "16", "--out"]
            .into_iter()
            .map(String::from)
            .chain([p.to_str().unwrap().to_string()])
            .collect::<Vec<_>>()
    };
    let run = |p: &std::path::Path| {
        let v = args(p);
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        assert!(mintime(&refs).status.success());
        std::fs::read_to_string(p).unwrap()
    };
    let first = run(&a);
    let second = run(&dir.path().join("b.svg"));
    assert_eq!(first, second);
    assert!(first.starts_with("<svg") && first.contains("</svg>"));
    assert_eq!(first.matches("<rect").count(), 256);
}

#[test]
fn bad_points_are_rejected() {
    let out = mintime(&["eval", "--fixture", "box-complement", "--point", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
}
