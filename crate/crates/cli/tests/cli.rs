use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_equidissect"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

const SQUARE: &str = r#"{"vertices":[["0","0"],["1","0"],["1","1"],["0","1"]]}"#;

#[test]
fn valuate_prints_one_result_per_input() {
    let out = run(&["valuate", "12", "-3/8", "0"], "");
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let vals: Vec<&Value> = v["results"].as_array().unwrap().iter().map(|r| &r["valuation"]).collect();
    assert_eq!(vals[0], &json!(2));
    assert_eq!(vals[1], &json!(-3));
    assert!(!vals[2].is_number());
    assert_eq!(v["traceRefs"], json!([]));
}

#[test]
fn valuate_rejects_garbage_with_exit_two() {
    let out = run(&["valuate", "1/0"], "");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "ParseError");
}

#[test]
fn negative_coordinates_are_values_not_flags() {
    let out = run(&["color", "-1/2", "-3", "--map", "U"], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["image"], json!(["-7/2", "-3"]));
    let out = run(&["momentum", "--line", "1", "-2", "4", "--count", "3"], "");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_subcommand_exits_two() {
    assert_eq!(run(&["frobnicate"], "").status.code(), Some(2));
}

#[test]
fn color_under_named_maps() {
    let out = run(&["color", "1", "0", "--map", "V"], "");
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    // V sends (1, 0) to (1, 1), which is colored C
    assert_eq!(v["image"], json!(["1", "1"]));
    assert_eq!(v["color"], "C");
}

#[test]
fn color_rejects_maps_that_change_area() {
    let map = r#"{"matrix":[["2","0"],["0","1"]],"translation":["0","0"]}"#;
    let out = run(&["color", "1", "0", "--map", map], "");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"], "InvalidMap");
}

#[test]
fn degree_of_the_unit_square_boundary() {
    let out = run(&["degree", "--map", "U"], SQUARE);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["degree"].is_i64());
}

#[test]
fn class_of_a_non_lattice_line_exits_one() {
    let input = r#"{"vertices":[["0","0"],["1/2","0"],["0","1"]]}"#;
    let out = run(&["class"], input);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["error"], "NotLattice");
    assert_eq!(v["details"]["index"], 1);
    assert_eq!(v["traceRefs"], json!([]));
}

#[test]
fn class_of_the_unit_square() {
    let out = run(&["class"], SQUARE);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["class"], json!([-1, 0, -1]));
    assert_eq!(v["mu"], json!([0, -1, 0]));
}

#[test]
fn balanced_reports_the_pairing() {
    let out = run(&["balanced"], SQUARE);
    assert_eq!(stdout_json(&out)["balanced"], true);
    let triangle = r#"{"vertices":[["0","0"],["1","0"],["0","1"]]}"#;
    let out = run(&["balanced"], triangle);
    let v = stdout_json(&out);
    assert_eq!(v["balanced"], false);
    assert!(v["pairing"].is_null());
}

#[test]
fn certify_reads_files_and_stdin_alike() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    std::fs::write(&path, SQUARE).unwrap();
    let from_file = run(&["certify", path.to_str().unwrap()], "");
    let from_stdin = run(&["certify", "-"], SQUARE);
    assert_eq!(from_file.stdout, from_stdin.stdout);
    let v = stdout_json(&from_file);
    assert_eq!(v["conclusion"]["kind"], "NoOddEquidissection");
    assert_eq!(v["parityConsistent"], true);
}

#[test]
fn verify_accepts_the_diagonal_cut() {
    let cut = json!({
        "polygon": { "vertices": [["0","0"],["1","0"],["1","1"],["0","1"]] },
        "triangles": [[["0","0"],["1","0"],["1","1"]], [["0","0"],["1","1"],["0","1"]]],
    });
    let out = run(&["verify"], &cut.to_string());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["pieceArea"], "1/2");
    assert_eq!(v["pieces"], 2);
}

#[test]
fn verify_rejects_overlaps_with_exit_one() {
    let cut = json!({
        "polygon": { "vertices": [["0","0"],["1","0"],["1","1"],["0","1"]] },
        "triangles": [[["0","0"],["1","0"],["1","1"]], [["0","0"],["1","0"],["0","1"]]],
    });
    let out = run(&["verify"], &cut.to_string());
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert!(v["error"].is_string());
    assert!(v["message"].is_string());
}

#[test]
fn verify_rejects_malformed_json_with_exit_two() {
    let out = run(&["verify"], r#"{"polygon": "#);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "ParseError");
}

#[test]
fn search_output_round_trips_through_verify() {
    let out = run(&["search", "--pieces", "2"], SQUARE);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for l in lines {
        let verified = run(&["verify"], l);
        assert_eq!(verified.status.code(), Some(0), "{l}");
    }
}

#[test]
fn search_is_deterministic() {
    let args = ["search", "--pieces", "4", "--denominator", "2", "--symmetry"];
    let a = run(&args, SQUARE);
    let b = run(&args, SQUARE);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn search_budget_exhaustion_exits_one_with_partial_output() {
    let out = run(&["search", "--pieces", "4", "--denominator", "2", "--budget", "10"], SQUARE);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["error"], "BudgetExceeded");
}

#[test]
fn search_first_only_stops_early() {
    let out = run(&["search", "--pieces", "4", "--denominator", "2", "--first-only"], SQUARE);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn search_rejects_zero_pieces() {
    let out = run(&["search", "--pieces", "0"], SQUARE);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn momentum_line_prints_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("plot.svg");
    let out = run(
        &["momentum", "--line", "1", "1", "1", "--count", "10", "--svg", svg.to_str().unwrap()],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("input,weights,image-x,image-y"));
    assert_eq!(lines.count(), 10);
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn momentum_points_and_torus() {
    let out = run(&["momentum", "--points", "-"], r#"[["4","1","1"]]"#);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("1/9;4/9;4/9"), "{text}");

    let out = run(&["momentum", "--torus", "-"], r#"[["4","1/2"]]"#);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("4,1/2,2,-1"));

    let out = run(&["momentum", "--torus", "-"], r#"[["0","1"]]"#);
    assert_eq!(out.status.code(), Some(1));
}
