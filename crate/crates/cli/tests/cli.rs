//! End-to-end runs of the binary: exit codes, JSON validity on every path,
//! and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ho2"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is valid json")
}

#[test]
fn validate_fixtures_exit_codes() {
    let good = run(&["validate", fixture("walking_isomorphism.json").to_str().unwrap()]);
    assert_eq!(good.status.code(), Some(0));
    let v = stdout_json(&good);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);

    let bad = run(&["validate", fixture("walking_arrow_invalid.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let v = stdout_json(&bad);
    assert_eq!(v["violations"][0]["axiom"], "M2/lift");

    let six = run(&["validate", fixture("six_object_lattice.json").to_str().unwrap()]);
    assert_eq!(six.status.code(), Some(0));
}

#[test]
fn validate_chain_inputs() {
    let ok = run(&["validate", data("d1.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let v = stdout_json(&ok);
    assert_eq!(v["homology"], serde_json::json!([0, 0]));

    let broken = run(&["validate", data("bad_complex.json").to_str().unwrap()]);
    assert_eq!(broken.status.code(), Some(1));

    let map = run(&["validate", data("quasi_iso.json").to_str().unwrap()]);
    assert_eq!(map.status.code(), Some(0));
    let v = stdout_json(&map);
    assert_eq!(v["classes"]["is_we"], true);
    assert_eq!(v["classes"]["is_cof"], true);
}

#[test]
fn malformed_input_exits_2() {
    let out = run(&["validate", data("malformed.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert!(v["error"].is_string());
}

#[test]
fn compute_homology_of_disk_is_zero() {
    let out = run(&["compute", "homology", data("d1.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["homology"], serde_json::json!([0, 0]));
}

#[test]
fn compute_factorize_reports_verified_flags() {
    for system in ["cof-trivfib", "trivcof-fib"] {
        let out = run(&[
            "compute",
            "factorize",
            data("quasi_iso.json").to_str().unwrap(),
            "--system",
            system,
        ]);
        assert_eq!(out.status.code(), Some(0), "{system}");
        let v = stdout_json(&out);
        assert_eq!(v["checks"]["recomposes"], true);
        assert_eq!(v["checks"]["class_flags"], true);
    }
}

#[test]
fn compute_q_cylinder_of_sphere() {
    let out = run(&["compute", "q-cylinder", data("s0.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["cylinder_degrees"], serde_json::json!([2, 1]));
    assert_eq!(v["fibrant"], true);
}

#[test]
fn compute_split_we_on_quasi_iso() {
    let out = run(&["compute", "split-we", "--map", data("quasi_iso.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["certificates"]["retraction_times_section_is_identity"], true);
    assert_eq!(v["certificates"]["recomposes"], true);
}

#[test]
fn compute_replace_on_non_fibrant_object() {
    let out = run(&[
        "compute",
        "replace",
        "--instance",
        fixture("six_object_lattice.json").to_str().unwrap(),
        "--object",
        "a",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["fibrant_replacement"], "b");
    assert_eq!(v["v"]["trivial_cofibration"], true);
    // and the non-cofibrant object in the other direction
    let out = run(&[
        "compute",
        "replace",
        "--instance",
        fixture("six_object_lattice.json").to_str().unwrap(),
        "--object",
        "z",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["cofibrant_replacement"], "y");
    assert_eq!(v["p"]["trivial_fibration"], true);
}

#[test]
fn compute_pi0_quotient_sphere_has_two_classes() {
    let out = run(&[
        "compute",
        "pi0-quotient",
        data("s0.json").to_str().unwrap(),
        data("s0.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["class_count"], 2);
}

#[test]
fn decide_pi0_exit_codes_and_witness() {
    let yes = run(&["decide", "pi0", data("pair_homotopic.json").to_str().unwrap()]);
    assert_eq!(yes.status.code(), Some(0));
    let v = stdout_json(&yes);
    assert_eq!(v["answer"], true);
    assert!(v["witness"].is_array());

    let no = run(&["decide", "pi0", data("pair_not_homotopic.json").to_str().unwrap()]);
    assert_eq!(no.status.code(), Some(1));
    let v = stdout_json(&no);
    assert_eq!(v["answer"], false);
    assert!(v["search_space"].is_string());
}

#[test]
fn decide_two_cells_equal() {
    let yes = run(&["decide", "two-cells-equal", data("cells_equal.json").to_str().unwrap()]);
    assert_eq!(yes.status.code(), Some(0));
    let v = stdout_json(&yes);
    assert_eq!(v["answer"], true);
    assert!(v["witness"].is_array(), "a second homotopy is printed");

    let no = run(&["decide", "two-cells-equal", data("cells_unequal.json").to_str().unwrap()]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn decide_classify_with_class_flag() {
    let yes = run(&[
        "decide",
        "classify",
        data("quasi_iso.json").to_str().unwrap(),
        "--class",
        "we",
    ]);
    assert_eq!(yes.status.code(), Some(0));
    let no = run(&[
        "decide",
        "classify",
        data("quasi_iso.json").to_str().unwrap(),
        "--class",
        "fib",
    ]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn decide_germ_on_tabular_homotopies() {
    let out = run(&[
        "decide",
        "germ",
        "--instance",
        fixture("six_object_lattice.json").to_str().unwrap(),
        data("germ_first.json").to_str().unwrap(),
        data("germ_second.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["answer"], true);
}

#[test]
fn identical_inputs_produce_identical_output() {
    let a = run(&["validate", fixture("six_object_lattice.json").to_str().unwrap()]);
    let b = run(&["validate", fixture("six_object_lattice.json").to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["compute", "q-cylinder", data("d1.json").to_str().unwrap()]);
    let d = run(&["compute", "q-cylinder", data("d1.json").to_str().unwrap()]);
    assert_eq!(c.stdout, d.stdout);
}
