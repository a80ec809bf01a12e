use std::process::Command;

fn fdstates() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fdstates"))
}

#[test]
fn run_preset_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = fdstates().args(["run", "fig1", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("fig1.csv").is_file());
    assert!(dir.path().join("fig1.report.json").is_file());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["scenario"], "fig1");
}

#[test]
fn run_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::copy(concat!(env!("CARGO_MANIFEST_DIR"), "/presets/fig4.json"), &path).unwrap();
    let out = fdstates()
        .arg("run")
        .arg(&path)
        .args(["--gamma", "0.1", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let dir2 = tempfile::tempdir().unwrap();
    let out = fdstates().args(["run", "fig1", "--samples", "11", "--out"]).arg(dir2.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir2.path().join("fig1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = fdstates().args(["run", "no-such-preset", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name":"bad","engine":"continuous","order":2,"chi":1,"eps":0.1,"duration":1,"sample_count":1}"#)
        .unwrap();
    let out = fdstates().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sample_count"));

    let out = fdstates().args(["run", "fig1", "--gamma", "0.1", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = fdstates().args(["verify", "--nmax", "3", "--bound", "0.05", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("verify.report.json").is_file());

    let out = fdstates().args(["verify", "--nmax", "3", "--bound", "1e-6"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = fdstates().args(["verify", "--nmax", "9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn presets_are_listed() {
    let out = fdstates().arg("presets").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fig1", "fig2", "fig3", "fig4", "squeezed"] {
        assert!(text.lines().any(|l| l == name));
    }
}
