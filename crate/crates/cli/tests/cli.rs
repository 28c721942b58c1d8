//! End-to-end runs of the binary: exit codes, report contents, JSON shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbicert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_finite_triangle_with_euler() {
    let out = run(&[
        "analyze",
        fixture("triangle_235.grp").to_str().unwrap(),
        "--euler",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("|G| = 60"));
    assert!(text.contains("FINITE_BOUND_OK"));
    assert!(text.contains("identity holds"));
}

#[test]
fn analyze_hyperbolic_triangle_with_witness() {
    let out = run(&[
        "analyze",
        fixture("triangle_237.grp").to_str().unwrap(),
        "--witness",
        fixture("w237.wit").to_str().unwrap(),
        "--max-cosets",
        "20000",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("INFINITE"));
    assert!(text.contains("NOT_KAZHDAN_T"));
    assert!(text.contains("NO_INFINITE_AMENABLE_NORMAL"));
    assert!(text.contains("BETTI1_LOWER_BOUND: 1/42"));
}

#[test]
fn analyze_malformed_is_a_parse_error() {
    let out = run(&["analyze", fixture("malformed.grp").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("syntax error"));
}

#[test]
fn analyze_free_group_without_enumeration() {
    let out = run(&[
        "analyze",
        fixture("free2.grp").to_str().unwrap(),
        "--no-enum",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("INFINITE"));
    assert!(text.contains("BETTI1_LOWER_BOUND: 1"));
}

#[test]
fn analyze_refuted_exponent_exits_one() {
    let out = run(&["analyze", fixture("dihedral_n4_wrong.grp").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("REFUTED"));
    assert!(text.contains("HYPOTHESIS_UNVERIFIED"));
    assert!(!text.contains("FINITE_BOUND_OK"));
}

#[test]
fn order_of_words() {
    let out = run(&["order", fixture("triangle_235.grp").to_str().unwrap(), "x*y"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "5");

    let out = run(&["order", fixture("z6.grp").to_str().unwrap(), "x^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "3");

    let out = run(&["order", fixture("z6.grp").to_str().unwrap(), "q"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn order_without_closed_table_is_inconclusive() {
    let out = run(&[
        "order",
        fixture("triangle_237.grp").to_str().unwrap(),
        "x",
        "--max-cosets",
        "10000",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn euler_reports() {
    let out = run(&["euler", fixture("z5.grp").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("b = (1, 0, 0)"));
    assert!(text.contains("identity holds"));

    let out = run(&["euler", fixture("dihedral_n4.grp").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("b = (1, 0, 1)"));
    assert!(text.contains("(b0 - b1 + b2)/|G| = 1/4 vs chi_orb = 1/4"));

    let out = run(&["euler", fixture("dihedral_n4_wrong.grp").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("instead of the declared"));
}

#[test]
fn json_report_shape() {
    let dir = std::env::temp_dir().join("orbicert-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json_path = dir.join("report_237.json");
    let out = run(&[
        "analyze",
        fixture("triangle_237.grp").to_str().unwrap(),
        "--witness",
        fixture("w237.wit").to_str().unwrap(),
        "--no-enum",
        "--deterministic",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    for key in ["version", "input", "certificate", "coset_stats", "euler", "timings"] {
        assert!(report.get(key).is_some(), "missing key {key}");
    }
    let cert = &report["certificate"];
    assert_eq!(cert["chi_orb"]["num"], "-1");
    assert_eq!(cert["chi_orb"]["den"], "42");
    assert_eq!(cert["group_size"]["kind"], "UNKNOWN");
    let conclusions = cert["conclusions"].as_array().unwrap();
    assert!(conclusions
        .iter()
        .any(|c| c["kind"] == "BETTI1_LOWER_BOUND" && c["value"]["num"] == "1" && c["value"]["den"] == "42"));
    assert_eq!(report["timings"]["total_ms"], 0);
    assert_eq!(report["coset_stats"]["closed"], false);
}

#[test]
fn json_embeds_standardized_table_when_closed() {
    let dir = std::env::temp_dir().join("orbicert-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json_path = dir.join("report_z5.json");
    let out = run(&[
        "analyze",
        fixture("z5.grp").to_str().unwrap(),
        "--deterministic",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["coset_table"]["size"], 5);
    let action = report["coset_table"]["action"].as_array().unwrap();
    assert_eq!(action.len(), 5);
    // breadth-first numbering: 1·x is coset 2, 1·x^-1 is coset 3
    assert_eq!(action[0][0], 2);
    assert_eq!(action[0][1], 3);
}

#[test]
fn positive_chi_without_size_is_inconclusive() {
    // chi > 0 with no closed table certifies nothing, even though the
    // abelianization verifies the single relator's order
    let out = run(&["analyze", fixture("z5.grp").to_str().unwrap(), "--no-enum"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("conclusions: none"));
}

#[test]
fn proper_power_warning_is_emitted() {
    let dir = std::env::temp_dir().join("orbicert-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.grp");
    std::fs::write(&path, "< x | (x^2)^3 >\n").unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("proper power"));
}
