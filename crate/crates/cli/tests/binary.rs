use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_rydgate");

fn preset(name: &str) -> String {
    format!("{}/presets/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn writes_csv_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("budget.csv");
    let status = Command::new(BIN)
        .args(["budget", "--config", &preset("grover.json"), "--format", "csv", "--seedless", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("label,scheme,mode,k,"));
}

#[test]
fn stdout_json_has_schema() {
    let out = Command::new(BIN).args(["lattice", "--config", &preset("table2.json")]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "rydgate-report/1");
}

#[test]
fn failed_ideal_check_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    let body = r#"{"scheme": "simulate", "simulate": {"scheme": "sequential", "k": 1, "omega_mhz": 1.0, "b_over_omega": 2.0, "check_ideal": true}}"#;
    std::fs::write(&cfg, body).unwrap();
    let out = Command::new(BIN).args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_config_exits_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"scheme": "sequential", "ks": [], "cases": []}"#).unwrap();
    let out = Command::new(BIN).args(["budget", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ks"));
}
