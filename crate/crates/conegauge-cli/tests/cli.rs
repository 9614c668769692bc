//! End-to-end tests of the binary: exit codes, reference values, file
//! round-trips and reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conegauge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn write_orthant(dir: &Path) -> String {
    let path = dir.join("orthant.json");
    fs::write(
        &path,
        r#"{"dim": 2, "rep": "H", "rows": [[-1.0, 0.0], [0.0, -1.0]]}"#,
    )
    .unwrap();
    path.to_string_lossy().into_owned()
}

fn write_halfplane(dir: &Path) -> String {
    let path = dir.join("halfplane.json");
    fs::write(&path, r#"{"dim": 2, "rep": "H", "rows": [[0.0, -1.0]]}"#).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn cone_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    let out = run(&["cone-check", "--cone", &orthant]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"proper\": true"));
    assert!(text.contains("\"schema\": 1"));

    let halfplane = write_halfplane(dir.path());
    let out = run(&["cone-check", "--cone", &halfplane]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"proper\": false"));

    // Truncated file: parse error, usage exit code.
    let broken = dir.path().join("broken.json");
    fs::write(&broken, r#"{"dim": 2, "rep": "H""#).unwrap();
    let out = run(&["cone-check", "--cone", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gauge_values_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    let out = run(&[
        "gauge", "--cone", &orthant, "--apex", "1,1", "--point", "-3,2", "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"gauge\": 2.0"), "{text}");
    assert!(text.contains("\"symmetrized\": 3.0"), "{text}");
    assert!(text.contains("\"bisection\""));

    let out = run(&["gauge", "--cone", &orthant, "--apex", "1,1", "--point", "0,0"]);
    let text = stdout(&out);
    assert!(text.contains("\"gauge\": 0.0"), "{text}");
    assert!(text.contains("\"kernel_member\": true"));
}

#[test]
fn gauge_rejects_boundary_apex() {
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    // -u = (-1, 0) has margin 0 on the second facet.
    let out = run(&["gauge", "--cone", &orthant, "--apex", "1,0", "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("margin"), "{err}");
}

#[test]
fn retract_reports_images_and_facet() {
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    let out = run(&["retract", "--cone", &orthant, "--apex", "1,1", "--point", "-3,2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let point = &json["points"][0];
    assert_eq!(point["q_image"], serde_json::json!([-5.0, 0.0]));
    assert_eq!(point["r_image"], serde_json::json!([2.0, 2.0]));
    assert_eq!(point["active_facet"], serde_json::json!(2));

    // Cone members are fixed points with no active-facet report.
    let out = run(&["retract", "--cone", &orthant, "--apex", "1,1", "--point=-1,-4"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let point = &json["points"][0];
    assert_eq!(point["q_image"], serde_json::json!([-1.0, -4.0]));
    assert_eq!(point["r_image"], serde_json::json!([0.0, 0.0]));
    assert!(point.get("active_facet").is_none());
}

#[test]
fn audit_passes_for_orthant() {
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    let out = run(&[
        "audit", "--cone", &orthant, "--apex", "1,1", "--samples", "500", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["report"]["idempotence_q"]["pass"], true);
    assert_eq!(json["report"]["subadditivity_r"]["pass"], true);
}

#[test]
fn proper_check_gauge_passes_euclidean_fails() {
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    let out = run(&[
        "proper-check", "--cone", &orthant, "--apex", "1,1", "--samples", "500", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "proper-check",
        "--functional",
        "euclidean",
        "--apex",
        "1,0",
        "--samples",
        "500",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["report"]["condition_i"]["pass"], false);
    assert_eq!(json["report"]["equivalence_consistent"], true);
}

#[test]
fn sphere_dump_reloads_on_the_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("sphere.csv");
    // Wedge cone: q(x) = max(0, x2 + |x1|).
    let wedge = dir.path().join("wedge.json");
    fs::write(
        &wedge,
        r#"{"dim": 2, "rep": "H", "rows": [[-1.0, -1.0], [1.0, -1.0]]}"#,
    )
    .unwrap();
    let out = run(&[
        "sphere-dump",
        "--cone",
        wedge.to_str().unwrap(),
        "--apex",
        "0,1",
        "--count",
        "100",
        "--seed",
        "9",
        "--output",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&dump).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# dim=2 seed=9");
    let mut rows = 0;
    for line in lines {
        let coords: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let q = (coords[1] + coords[0].abs()).max(0.0);
        assert!((q - 1.0).abs() <= 1e-9, "reloaded point off sphere: {line}");
        rows += 1;
    }
    assert_eq!(rows, 100);
}

#[test]
fn single_row_dump() {
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    let out = run(&["sphere-dump", "--cone", &orthant, "--apex", "1,1", "--count", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn fixtures_export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("fixtures");
    let out = run(&["fixtures", "--export", export.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let listing: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(listing["fixtures"].as_array().unwrap().len(), 6);

    // Every exported cone file loads back as a proper cone with identical
    // normalized rows (exit 0 from cone-check on the halfspace forms).
    for entry in fs::read_dir(&export).unwrap() {
        let path = entry.unwrap().path();
        let first = fs::read_to_string(&path).unwrap();
        let out = run(&["cone-check", "--cone", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "fixture {path:?} not proper");
        // Rows are already normalized, so a reload writes identical bytes.
        let json: serde_json::Value = serde_json::from_str(&first).unwrap();
        let reloaded = serde_json::to_string_pretty(&json).unwrap();
        assert_eq!(first.trim_end(), reloaded);
    }
}

#[test]
fn usage_errors_exit_two() {
    // Unknown subcommand.
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // Zero samples.
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    let out = run(&[
        "audit", "--cone", &orthant, "--apex", "1,1", "--samples", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Zero seed.
    let out = run(&[
        "audit", "--cone", &orthant, "--apex", "1,1", "--seed", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Dimension mismatch between apex and cone.
    let out = run(&["gauge", "--cone", &orthant, "--apex", "1,1,1", "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let orthant = write_orthant(dir.path());
    let args = [
        "audit", "--cone", &orthant, "--apex", "1,1", "--samples", "300", "--seed", "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}
