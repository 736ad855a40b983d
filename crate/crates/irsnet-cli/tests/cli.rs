//! Binary-level behavior: exit codes and emitted files.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_irsnet"))
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("irsnet-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn fig7_writes_csv_and_sidecar() {
    let dir = scratch_dir("fig7");
    let out = dir.join("bounds.csv");
    let status = bin()
        .args(["fig7", "--snr-min-db", "0", "--snr-max-db", "10", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("surfaces,snr_db,edge_loss_db,bound_lg_bits,bound_ng_bits"));
    let meta = std::fs::read_to_string(dir.join("bounds.meta.json")).unwrap();
    assert!(meta.contains("\"experiment\": \"fig7\""));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn infeasible_split_is_a_config_error() {
    let dir = scratch_dir("fig8");
    let output = bin()
        .args(["fig8", "--cases", "6x5", "--out"])
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("decomposition"), "stderr: {stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_grid_step_is_a_config_error() {
    let dir = scratch_dir("fig5");
    let output = bin()
        .args(["fig5", "--grid-step-deg", "0.7", "--out"])
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn scenario_requires_a_config() {
    let output = bin().arg("scenario").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("--config"), "stderr: {stderr}");
}

#[test]
fn scenario_names_the_offending_field() {
    let dir = scratch_dir("scenario");
    let cfg = dir.join("bad.toml");
    std::fs::write(
        &cfg,
        "max_order = 1\nnoise_power = 1.0\n[[surfaces]]\nelements = 4\nspacing = 0.5\n\
         [[pairs]]\nentry = 7\nentry_deg = 30.0\nexit = 1\nexit_deg = 135.0\n\
         [[weights]]\nkind = \"ones\"\n",
    )
    .unwrap();
    let output = bin()
        .arg("scenario")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("pairs[0].entry"), "stderr: {stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn scenario_runs_a_packaged_config() {
    let dir = scratch_dir("scenario-ok");
    let cfg = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/two_surface.toml"
    );
    let out = dir.join("two.csv");
    let output = bin()
        .arg("scenario")
        .args(["--config", cfg, "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("capacity"), "stdout: {stdout}");
    assert!(out.exists());
    std::fs::remove_dir_all(&dir).ok();
}
