//! End-to-end runs of the `hpsig` binary against the shipped fixtures.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn hpsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpsig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn signature_of_cp2_fixture() {
    let out = hpsig(&["signature", &fixture("cp2_9.json"), "--oracle"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["results"]["signature"], 1);
    assert_eq!(report["results"]["axioms"], "pass");
    assert_eq!(report["results"]["cup_oracle"], 1);
    assert_eq!(report["mode"], "exact");
    // reversed orientation
    let out = hpsig(&["signature", &fixture("cp2_9.json"), "--reverse"]);
    let report = stdout_json(&out);
    assert_eq!(report["results"]["signature"], -1);
}

#[test]
fn validate_rejects_rp2_with_exit_1() {
    let out = hpsig(&["validate", &fixture("rp2_6.json")]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["error"]["kind"], "NotClosedOriented");
}

#[test]
fn missing_argument_exits_2() {
    let out = hpsig(&["signature"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_2() {
    let out = hpsig(&["signature", "no_such_file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_exits_2() {
    let dir = std::env::temp_dir().join("hpsig_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = hpsig(&["signature", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_reports_exact_residuals() {
    let out = hpsig(&["validate", &fixture("torus_7.json")]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["results"]["axioms"]["pass"], true);
    assert_eq!(report["residuals"]["symmetry"], 0.0);
    assert_eq!(report["residuals"]["chain_relation"], 0.0);
    assert_eq!(report["residuals"]["raw_chain_relation"], 0.0);
}

#[test]
fn multisig_consistency_over_fixture_covers() {
    for m in [2, 3, 4] {
        let out = hpsig(&[
            "multisig",
            &fixture("torus_7.json"),
            "--cover",
            &fixture(&format!("cocycle_torus_z{m}.json")),
            "--group",
            &fixture(&format!("group_z{m}.json")),
        ]);
        assert!(out.status.success(), "Z/{m}");
        let report = stdout_json(&out);
        assert_eq!(report["results"]["total_space_consistency"], true);
        assert_eq!(report["results"]["trace"], "0");
        let entries = report["results"]["multisignature"].as_array().unwrap();
        assert_eq!(entries.len(), m);
        for e in entries {
            assert_eq!(e["signature"], 0);
        }
    }
}

#[test]
fn family_emits_rows_and_csv() {
    let dir = std::env::temp_dir().join("hpsig_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("family.csv");
    let out = hpsig(&[
        "family",
        &fixture("torus_7.json"),
        "--cover",
        &fixture("cocycle_torus_zz.json"),
        "--samples-per-circle",
        "8",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    let rows = report["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 64);
    assert_eq!(rows[0]["theta"], serde_json::json!([0.0, 0.0]));
    assert_eq!(rows[0]["homology_ranks"], serde_json::json!([1, 2, 1]));
    assert_eq!(report["results"]["distinct_signatures"], serde_json::json!([0]));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("theta,ranks,signature"));
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn product_command_verifies_formula() {
    let out = hpsig(&[
        "product",
        &fixture("sphere_2.json"),
        &fixture("sphere_2.json"),
    ]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["results"]["sig_product"], 0);
    assert_eq!(report["results"]["matches"], true);
    assert_eq!(report["results"]["epsilon"], 0);
}

#[test]
fn subdivide_and_double_round_trip() {
    let dir = std::env::temp_dir().join("hpsig_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("sd_torus.json");
    let out = hpsig(&[
        "subdivide",
        &fixture("torus_7.json"),
        "--check-signature",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["results"]["signature_preserved"], true);
    // the written complex can be consumed again
    let out = hpsig(&["signature", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["results"]["signature"], 0);

    let out = hpsig(&["double", &fixture("cylinder_6.json")]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["results"]["euler_characteristic"], 0);
    assert_eq!(report["results"]["certificate"]["is_closed"], true);

    let out = hpsig(&["double", &fixture("torus_7.json")]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["error"]["kind"], "NoBoundary");
}

#[test]
fn bordism_command_reports_zero() {
    let out = hpsig(&["bordism", &fixture("simplex_5.json")]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["results"]["signature"], 0);
    assert_eq!(report["results"]["is_zero"], true);
}

#[test]
fn controlled_check_is_seeded_and_deterministic() {
    let out1 = hpsig(&["controlled-check", "--seed", "11", "--trials", "50"]);
    let out2 = hpsig(&["controlled-check", "--seed", "11", "--trials", "50"]);
    assert!(out1.status.success());
    let r1 = stdout_json(&out1);
    let r2 = stdout_json(&out2);
    assert_eq!(r1["results"], r2["results"]);
    assert_eq!(r1["seed"], 11);
    assert_eq!(r1["results"]["pass"], true);
}

#[test]
fn report_schema_is_stable_across_commands() {
    let reports = [
        hpsig(&["signature", &fixture("sphere_2.json")]),
        hpsig(&["validate", &fixture("sphere_2.json")]),
        hpsig(&["bordism", &fixture("simplex_5.json")]),
        hpsig(&["controlled-check", "--trials", "5"]),
    ];
    for out in &reports {
        let report = stdout_json(out);
        for key in ["command", "inputs", "mode", "seed", "results", "residuals", "wall_time_ms"] {
            assert!(
                report.get(key).is_some(),
                "missing key {key} in {report}"
            );
        }
    }
}
