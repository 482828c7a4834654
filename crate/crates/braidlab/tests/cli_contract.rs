//! Exit-code and wire-format contract of the braidlab binary.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration error.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_braidlab"))
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("braidlab_cli_contract");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const FOUR_QUBIT: &str = r#"{
  "system": {"kind": "FourQubit", "arm": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0}},
  "seed": 3
}"#;

const TEN_QUBIT_FORCED_W3: &str = r#"{
  "system": {"kind": "TenQubit",
             "left": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0},
             "right": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0},
             "middle": {"magnitude": 1.0, "polar": 0.7, "azimuth": 0.3}},
  "verify": {"force_include_w3": true},
  "seed": 3
}"#;

#[test]
fn verify_succeeds_with_exit_zero() {
    let config = temp_file("ok.json", FOUR_QUBIT);
    let output = bin()
        .args([
            "verify",
            "--config",
            config.to_str().unwrap(),
            "--no-header-timestamp",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("\"passed\": true"));
}

#[test]
fn forced_w3_fails_with_exit_one() {
    let config = temp_file("w3.json", TEN_QUBIT_FORCED_W3);
    let output = bin()
        .args([
            "verify",
            "--config",
            config.to_str().unwrap(),
            "--no-header-timestamp",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1), "{output:?}");
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("forced_w3_commutes"));
    assert!(text.contains("\"passed\": false"));
}

#[test]
fn malformed_config_exits_two() {
    let config = temp_file("broken.json", "{ not json");
    let output = bin()
        .args(["verify", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn unknown_config_keys_exit_two() {
    let config = temp_file(
        "unknown.json",
        r#"{"system": {"kind": "FourQubit", "arm": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0}}, "seed": 1, "surprise": 1}"#,
    );
    let output = bin()
        .args(["verify", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn missing_config_exits_two() {
    let output = bin().args(["verify"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn export_emits_qasm() {
    let config = temp_file(
        "export.json",
        r#"{
  "system": {"kind": "FourQubit", "arm": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0}},
  "braid": {"arm": "Left", "target_phi": 1.5707963267948966, "delta_tilde": 6.3, "n_equator": 3},
  "export_format": "qasm2",
  "seed": 3
}"#,
    );
    let output = bin()
        .args(["export", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("OPENQASM 2.0;"));
    assert!(text.contains("qreg q[4];"));
}

#[test]
fn braid_report_lists_reference_step_counts() {
    // 9 total steps for the pi/2 sweep at three equatorial steps, 15 for
    // the pi/4 sweep.
    let s_config = temp_file(
        "s.json",
        r#"{
  "system": {"kind": "FourQubit", "arm": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0}},
  "braid": {"arm": "Left", "target_phi": 1.5707963267948966, "delta_tilde": 6.3, "n_equator": 3},
  "seed": 3
}"#,
    );
    let output = bin()
        .args([
            "braid",
            "--config",
            s_config.to_str().unwrap(),
            "--no-header-timestamp",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("\"gate\": \"S\""));
    assert!(text.contains("\"n_total\": 9"));

    let t_config = temp_file(
        "t.json",
        r#"{
  "system": {"kind": "FourQubit", "arm": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0}},
  "braid": {"arm": "Left", "target_phi": 0.7853981633974483, "delta_tilde": 4.2, "n_equator": 3},
  "seed": 3
}"#,
    );
    let output = bin()
        .args([
            "braid",
            "--config",
            t_config.to_str().unwrap(),
            "--no-header-timestamp",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("\"gate\": \"T\""));
    assert!(text.contains("\"n_total\": 15"));
}

#[test]
fn ten_qubit_braid_reports_sixteen_input_fidelities() {
    let config = temp_file(
        "rxx.json",
        r#"{
  "system": {"kind": "TenQubit",
             "left": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0},
             "right": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0},
             "middle": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0}},
  "braid": {"arm": "Middle", "target_phi": 1.5707963267948966, "delta_tilde": 6.3, "n_equator": 3},
  "seed": 3
}"#,
    );
    let output = bin()
        .args([
            "braid",
            "--config",
            config.to_str().unwrap(),
            "--no-header-timestamp",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8(output.stdout).unwrap()).unwrap();
    assert_eq!(
        report["per_input_state_fidelities"]
            .as_array()
            .unwrap()
            .len(),
        16
    );
}

#[test]
fn operation_field_must_match_subcommand() {
    let config = temp_file(
        "mismatch.json",
        r#"{
  "system": {"kind": "FourQubit", "arm": {"magnitude": 1.0, "polar": 0.0, "azimuth": 0.0}},
  "operation": "sweep",
  "seed": 3
}"#,
    );
    let output = bin()
        .args(["verify", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}
