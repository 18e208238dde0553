use std::process::Command;

use serde_json::Value;

fn aztec(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_aztec"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let stdout = String::from_utf8(out.stdout).expect("utf-8");
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (v, code)
}

#[test]
fn contour_of_worked_example() {
    let (v, code) = aztec(&["contour", "4", "3", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["sides"], serde_json::json!([5, -9, 6, 2, -6, 3]));
    assert_eq!(v["region"], "Region 1");
    assert_eq!(v["signs"], "(+,-,+,+,-,+)");
    assert_eq!(v["self_intersecting"], false);
}

#[test]
fn negative_coordinates_parse() {
    let (v, code) = aztec(&["cluster-var", "0", "-1", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "x1");
}

#[test]
fn matchings_count_agrees_with_permanent() {
    let (v, code) = aztec(&["matchings", "1", "1", "1", "--count"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 32);
    assert_eq!(v["permanent"], "32");
}

#[test]
fn weighted_sum_matches_cluster_variable() {
    let (sum, _) = aztec(&["matchings", "2", "1", "0", "--sum"]);
    let (var, _) = aztec(&["cluster-var", "2", "1", "0"]);
    assert_eq!(sum["sum"], var["value"]);
    let (framed, _) = aztec(&["matchings", "2", "1", "0", "--framed-sum"]);
    let (framed_var, _) = aztec(&["cluster-var", "2", "1", "0", "--framed"]);
    assert_eq!(framed["framed_sum"], framed_var["value"]);
}

#[test]
fn lattice_is_graded() {
    let (v, code) = aztec(&["matchings", "1", "1", "1", "--lattice-dot"]);
    assert_eq!(code, 0);
    assert_eq!(v["graded"], true);
    assert!(v["dot"].as_str().unwrap().starts_with("digraph"));
}

#[test]
fn minmatch_verifies_and_writes_svg() {
    let dir = std::env::temp_dir().join(format!("aztec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("c432.svg");
    let (v, code) = aztec(&[
        "minmatch",
        "4",
        "3",
        "2",
        "--verify",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["equals_reference"], true);
    assert_eq!(v["reference"], "descent");
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn render_is_deterministic() {
    let (a, _) = aztec(&["render", "2", "1", "0"]);
    let (b, _) = aztec(&["render", "2", "1", "0"]);
    assert_eq!(a, b);
    assert!(a["svg_text"].as_str().unwrap().contains("<svg"));
}

#[test]
fn tau_word_reaches_the_point() {
    let (v, code) = aztec(&["tau-word", "1", "1", "1"]);
    assert_eq!(code, 0);
    assert!(v["word"].as_array().is_some_and(|w| !w.is_empty()));
}

#[test]
fn verify_small_cube() {
    let (v, code) = aztec(&["verify", "--max", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 24);
    assert_eq!(v["skipped"], 3);
    let skipped = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["status"] == "skipped")
        .count();
    assert_eq!(skipped, 3);
}

#[test]
fn self_intersecting_point_is_an_error() {
    let (_, code) = aztec(&["minmatch", "0", "0", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn matching_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_aztec"))
        .args(["matchings", "4", "3", "2", "--count"])
        .env("AZTEC_MATCHING_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("10"));
}
