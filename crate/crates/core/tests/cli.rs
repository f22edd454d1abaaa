use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn ccrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccrlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(file: &str) -> (i32, Value) {
    let path = scenario(file);
    let out = ccrlab(&["run", path.to_str().unwrap()]);
    let doc = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), doc)
}

fn check<'a>(doc: &'a Value, name: &str) -> &'a Value {
    doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL_WINDOW: &str = r#"
name = "edge"
seed = 1
checks = ["cone", "index"]

[cone]
generators = [["1", "0"], ["0", "1"]]

[lattice]
basis = [["1", "-1"]]

[grid]
yLo = ["0"]
yHi = ["2"]
h = "1/4"
M = 4
ladder = ["1", "2", "3", "4"]
"#;

#[test]
fn q2_rank1_passes_with_index_one() {
    let (code, doc) = run_json("q2_rank1.toml");
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], "ccrlab-report/1");
    assert_eq!(doc["status"], "pass");
    assert_eq!(check(&doc, "index")["metrics"]["index"], 1);
    let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["cone", "pspace", "rep", "cocycles", "fock", "index", "classify"]);
    assert!(doc["hash"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn orthant_without_lattice_has_no_cocycle() {
    let (code, doc) = run_json("orthant_nolattice.toml");
    assert_eq!(code, 0);
    let c = check(&doc, "cocycles");
    assert_eq!(c["status"], "pass");
    assert_eq!(c["metrics"]["hasNonzeroCocycle"], false);
    assert_eq!(check(&doc, "index")["metrics"]["index"], 0);
}

#[test]
fn malformed_config_exits_2_without_report() {
    let out = ccrlab(&["run", scenario("malformed.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn failed_check_exits_1() {
    // The window starts on the boundary of A, so no interior point is safe.
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "edge.toml", SMALL_WINDOW);
    let out = ccrlab(&["run", &path]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(check(&doc, "index")["status"], "fail");
    assert_eq!(check(&doc, "cone")["status"], "pass");
}

#[test]
fn short_ladder_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL_WINDOW
        .replace(r#"checks = ["cone", "index"]"#, r#"checks = ["cocycles"]"#)
        .replace(r#"["1", "2", "3", "4"]"#, r#"["1", "1"]"#);
    let path = write_temp(&dir, "short.toml", &text);
    let out = ccrlab(&["run", &path]);
    assert_eq!(out.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "unstable");
}

#[test]
fn reports_are_deterministic_apart_from_wall_time() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wallTimeMs");
        v
    };
    let (_, a) = run_json("q2_wedge.toml");
    let (_, b) = run_json("q2_wedge.toml");
    assert_eq!(strip(a), strip(b));
}

#[test]
fn csv_report_has_one_line_per_check() {
    let out = ccrlab(&["run", "--csv", scenario("q2_c.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn classify_equal_and_different_lattices() {
    let (a, b, c) = (scenario("q2_a.toml"), scenario("q2_b.toml"), scenario("q2_c.toml"));
    let out = ccrlab(&["classify", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("equivalent: true"));
    let out = ccrlab(&["classify", "--json", a.to_str().unwrap(), c.to_str().unwrap()]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["equivalent"], false);
    assert_eq!(doc["certificate"]["valid"], true);
    assert_eq!(doc["certificate"]["witness"], serde_json::json!(["1/2", "-1/2"]));
}

#[test]
fn boundary_reports_the_free_dimension() {
    let out = ccrlab(&["boundary", scenario("q3_rank1.toml").to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("compact: false"), "{text}");
    assert!(text.contains("d_eff=2"));
    let out = ccrlab(&["boundary", scenario("q3_rank2.toml").to_str().unwrap()]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("compact: true"));
}

#[test]
fn index_and_cocycles_subcommands() {
    let path = scenario("q2_wedge.toml");
    let out = ccrlab(&["index", "--json", path.to_str().unwrap()]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["index"], 2);
    let out = ccrlab(&["cocycles", path.to_str().unwrap()]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("dim: 2"));
}

#[test]
fn export_gram_has_units_minus_one_rows() {
    let out = ccrlab(&["export", scenario("q2_rank1.toml").to_str().unwrap(), "--what", "gram"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // Ten units, Gram relative to the last one.
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().all(|l| l.split(',').count() == 18));
}

#[test]
fn export_masks_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("mask.bin");
    let path = scenario("q2_rank1.toml");
    let out = ccrlab(&["export", path.to_str().unwrap(), "--what", "masks", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let file = ccrlab::pspace::MaskFile::read_from(std::fs::File::open(&out_path).unwrap()).unwrap();
    assert_eq!((file.d, file.r, file.m), (2, 1, 4));
    let out = ccrlab(&["export", path.to_str().unwrap(), "--what", "masks"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_matrices_lists_shift_entries() {
    let out = ccrlab(&["export", scenario("q2_rank1.toml").to_str().unwrap(), "--what", "matrices"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("generator,dy,du,row,col,value"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1")));
}

#[test]
fn verify_fock_and_flags() {
    let path = scenario("q2_rank1.toml");
    let out = ccrlab(&["verify-fock", "--threads", "2", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("weyl: pass") && text.contains("units: pass"), "{text}");
    let out = ccrlab(&["boundary", "--window-scale", "3/2", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = ccrlab(&["boundary", "--window-scale", "x", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
