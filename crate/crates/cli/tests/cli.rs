//! End-to-end tests of the binary: golden outputs, exit codes, file
//! round-trips and the exactness audit on emitted JSON.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_newtonaj"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON envelope")
}

fn fukui_f0_file(dir: &Path) -> PathBuf {
    let path = dir.join("fukui_f0.json");
    let content = serde_json::json!({
        "schema": 1,
        "variables": ["x1", "x2", "x3", "x4"],
        "support": [
            [2, 2, 2, 2],
            [1, 0, 8, 0],
            [0, 1, 0, 8],
            [8, 0, 0, 1],
            [0, 8, 1, 0]
        ],
        "nondegenerate": true
    });
    std::fs::write(&path, serde_json::to_string_pretty(&content).unwrap()).unwrap();
    path
}

#[test]
fn loj_on_e8_matches_the_documented_shape() {
    let v = run_json(&["--expr", "x^2+y^3+z^5", "loj"]);
    assert_eq!(v["result"]["loj"], "4");
    assert_eq!(v["result"]["morse_exception"], false);
    assert_eq!(v["result"]["witness_facet"]["maximal_axial"], "5");
    assert_eq!(v["command"], "loj");
    assert_eq!(v["schema"], 1);
}

#[test]
fn loj_check_is_consistent_on_e8() {
    let v = run_json(&["--expr", "x^2+y^3+z^5", "loj", "--check"]);
    assert_eq!(v["result"]["consistent"], true);
    assert_eq!(v["result"]["newton_number_route"], "4");
}

#[test]
fn aj_level_three_on_fukui_f0() {
    let dir = tempfile::tempdir().unwrap();
    let path = fukui_f0_file(dir.path());
    let v = run_json(&["--input", path.to_str().unwrap(), "aj", "--level", "3"]);
    assert_eq!(
        v["result"]["polygon"],
        serde_json::json!([{ "alpha": "455/47", "coeff": 8 }])
    );
    let w = run_json(&["--input", path.to_str().unwrap(), "loj"]);
    assert_eq!(w["result"]["loj"], "408/47");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let out = run(&["--expr", "x^-1 + y", "loj"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at byte 2"), "stderr: {err}");
    assert!(err.contains("nonnegative"), "stderr: {err}");
}

#[test]
fn out_of_range_level_is_an_input_error() {
    let out = run(&["--expr", "x^2+y^3+z^5", "aj", "--level", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn require_coefficients_is_rejected() {
    let out = run(&["--expr", "x^2+y^2", "--require-coefficients", "loj"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unsupported"), "stderr: {err}");
}

#[test]
fn missing_input_and_double_input_are_input_errors() {
    let out = run(&["loj"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = fukui_f0_file(dir.path());
    let out = run(&[
        "--expr",
        "x^2",
        "--input",
        path.to_str().unwrap(),
        "loj",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bko_flags_the_counterexample_with_exit_zero() {
    let v = run_json(&[
        "--expr",
        "x^2 + y^2 + x z + x w + y z + y w + z^3 + w^3",
        "bko",
    ]);
    assert_eq!(v["result"]["loj"], "1");
    assert_eq!(v["result"]["morse_exception"], true);
    assert_eq!(v["result"]["predicted"], "2");
    assert_eq!(v["result"]["matches"], false);
    let facets = v["result"]["facets"].as_array().unwrap();
    assert_eq!(facets.len(), 2);
    assert!(facets.iter().all(|f| f["exceptional"] == false));
}

#[test]
fn diagram_lists_the_e8_coordinate_facets() {
    let v = run_json(&["--expr", "x^2+y^3+z^5", "diagram"]);
    assert_eq!(v["result"]["convenient"], true);
    assert_eq!(v["result"]["multiplicity"], "2");
    assert_eq!(v["result"]["maximal_axial"], "5");
    let coord = v["result"]["coordinate_facets"].as_array().unwrap();
    assert_eq!(coord.len(), 7);
}

#[test]
fn triangulation_round_trip_and_cn() {
    let dir = tempfile::tempdir().unwrap();
    let expr = "x*y + x*z + 2*y*z + z^2";
    let v = run_json(&["--expr", expr, "tri", "--generate"]);
    assert_eq!(v["result"]["valid"], true);
    assert_eq!(v["result"]["coordinate_cells"], 5);

    // Feed the generated cells back in as a file.
    let path = dir.path().join("tri.json");
    std::fs::write(
        &path,
        serde_json::to_string(&serde_json::json!({ "cells": v["result"]["cells"] })).unwrap(),
    )
    .unwrap();
    let w = run_json(&["--expr", expr, "tri", "--file", path.to_str().unwrap()]);
    assert_eq!(w["result"]["cells"], v["result"]["cells"]);

    // An invalid (non-covering) triangulation is an input error.
    let partial = dir.path().join("partial.json");
    std::fs::write(
        &partial,
        r#"{"cells": [[[0,1,1],[1,0,1],[1,1,0]]]}"#,
    )
    .unwrap();
    let out = run(&["--expr", expr, "tri", "--file", partial.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cover"));

    // CN at the empty cell.
    let c = run_json(&["--expr", expr, "cn", "--empty"]);
    assert_eq!(
        c["result"]["cn"],
        serde_json::json!([{ "alpha": "2", "coeff": "1/2" }])
    );
}

#[test]
fn conjecture_report_on_twosimp() {
    let v = run_json(&["--expr", "x*y + x*z + 2*y*z + z^2", "conjecture"]);
    assert_eq!(v["result"]["loj"], "1");
    assert_eq!(v["result"]["conjecture_a_deg"], "1");
    assert_eq!(v["result"]["conjecture_a_facet"], "1");
    assert_eq!(v["result"]["conjecture_a_deg_matches"], true);
}

#[test]
fn props_passes_on_e8() {
    let out = run(&["--expr", "x^2+y^3+z^5", "props"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["ok"], true);
}

#[test]
fn render_is_deterministic_and_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.svg");
    let out2 = dir.path().join("b.svg");
    let v = run_json(&[
        "--expr",
        "x^2+y^3+z^5",
        "render",
        "--out",
        out1.to_str().unwrap(),
    ]);
    assert_eq!(
        v["result"]["vertices"],
        serde_json::json!([["0", "2"], ["2", "1"], ["-1", "2"], ["9", "0"]])
    );
    run_json(&[
        "--expr",
        "x^2+y^3+z^5",
        "render",
        "--out",
        out2.to_str().unwrap(),
    ]);
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "byte-identical across runs");
    let svg = String::from_utf8(a).unwrap();
    assert!(svg.contains("polyline"));
}

#[test]
fn json_input_round_trips_through_the_envelope_echo() {
    let dir = tempfile::tempdir().unwrap();
    let path = fukui_f0_file(dir.path());
    let v = run_json(&["--input", path.to_str().unwrap(), "diagram"]);
    let echo = &v["input"];
    // Re-run with the echoed input; results must agree exactly.
    let path2 = dir.path().join("echo.json");
    std::fs::write(&path2, serde_json::to_string(echo).unwrap()).unwrap();
    let w = run_json(&["--input", path2.to_str().unwrap(), "diagram"]);
    assert_eq!(v["result"], w["result"]);
    assert_eq!(w["input"], *echo);
}

#[test]
fn no_floating_point_literals_in_json_results() {
    // Every numeric leaf in the result of a spread of commands is an
    // integer or an exact rational string.
    let commands: Vec<Vec<&str>> = vec![
        vec!["--expr", "x^2+y^3+z^5", "diagram"],
        vec!["--expr", "x^2+y^3+z^5", "aj"],
        vec!["--expr", "x^2+y^3+z^5", "jac", "--level", "1"],
        vec!["--expr", "x^2+y^3+z^5", "loj"],
        vec!["--expr", "x^2+y^3+z^5", "nn"],
        vec!["--expr", "x^2+y^3+z^5", "salpha", "--alpha", "7/2"],
        vec!["--expr", "x*y + x*z + 2*y*z + z^2", "conjecture"],
    ];
    for args in commands {
        let out = run(&args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        // A float literal would surface as digits.digits in the result.
        let result_text = serde_json::to_string(&v["result"]).unwrap();
        for (i, _) in result_text.match_indices('.') {
            let before = result_text.as_bytes()[i.saturating_sub(1)] as char;
            let after = result_text.as_bytes().get(i + 1).copied().unwrap_or(b' ') as char;
            assert!(
                !(before.is_ascii_digit() && after.is_ascii_digit()),
                "float-looking literal in output of {args:?}"
            );
        }
        assert_no_float(&v);
    }
}

fn assert_no_float(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "non-integer number {n}"),
        Value::Array(a) => a.iter().for_each(assert_no_float),
        Value::Object(o) => o.values().for_each(assert_no_float),
        _ => {}
    }
}

#[test]
fn vars_flag_pins_the_coordinate_order() {
    let v = run_json(&["--expr", "b^3 + a^2", "--vars", "a,b", "diagram"]);
    assert_eq!(
        v["input"]["variables"],
        serde_json::json!(["a", "b"])
    );
    assert_eq!(
        v["input"]["support"],
        serde_json::json!([[0, 3], [2, 0]])
    );
}

#[test]
fn signed_newton_numbers_from_the_cli() {
    let v = run_json(&["--expr", "x^2+y^3+z^5", "nn", "--signed"]);
    assert_eq!(v["result"]["mu"], "8");
    assert_eq!(v["result"]["nu"], "8");
    let w = run_json(&["--expr", "x^2+y^3+z^5", "nn", "--signed", "--alpha", "4"]);
    assert_eq!(w["result"]["nu"], "-2");
}
