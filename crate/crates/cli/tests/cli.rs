//! End-to-end driver tests: exit-code contract, artifact layout, JSON shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noncutoff"))
}

fn workdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("noncutoff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn small_verify_config(dir: &Path) -> PathBuf {
    let p = dir.join("verify.toml");
    write(
        &p,
        r#"
[model]
gamma = -1.0
s = 0.6
theta_min = 0.01

[density]
kind = "maxwellian"

[quad]
n_theta = 8
n_phi = 6
n_vstar_radial = 8
n_vstar_angular = 6
plane_radial_nodes = 12
plane_angular_nodes = 8
r_max = 8.0

[sweep]
seed = 7
v0_samples = [4.0]
r_samples = [0.5, 1.0]
"#,
    );
    p
}

fn run_ok(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn unknown_lemma_exits_2_with_id_list() {
    let dir = workdir();
    let cfg = small_verify_config(&dir);
    let out = bin()
        .args(["verify", "nope", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("annulus") && err.contains("kide"), "{err}");
}

#[test]
fn unknown_flag_exits_2() {
    let out = bin().args(["solve", "--wat"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_annulus_refine_writes_report_with_drift() {
    let dir = workdir();
    let cfg = small_verify_config(&dir);
    let outdir = dir.join("annulus-out");
    let out = bin()
        .args(["verify", "annulus", "--refine", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&outdir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", run_ok(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(outdir.join("report_annulus.json")).unwrap())
            .unwrap();
    assert_eq!(report["lemma_id"], "annulus");
    assert!(report["refinement_drift"].is_number());
    assert!(outdir.join("sweep_annulus.csv").exists());
    assert!(outdir.join("manifest.json").exists());
}

#[test]
fn cancel2_rejects_small_s() {
    let dir = workdir();
    let p = dir.join("cancel2.toml");
    write(
        &p,
        r#"
[model]
gamma = -1.0
s = 0.4

[density]
kind = "maxwellian"
"#,
    );
    let out = bin()
        .args(["verify", "cancel2", "--config"])
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn geometry_selftest_passes_and_prints_json() {
    let out = bin()
        .args(["geometry", "selftest", "--pairs", "40", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&run_ok(&out)).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 5);
}

#[test]
fn cov_diagnostics_match_hand_values() {
    let out = bin()
        .args(["cov", "--gamma", "-2", "--s", "0.5", "--v0", "4", "--r", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&run_ok(&out)).unwrap();
    assert_eq!(v["regime"], "very_soft");
    assert!((v["radius_parallel"].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-12);
    assert!((v["radius_perp"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    // T0 diagonal (1/16, 1/4, 1/4) for v0 along the first axis
    let t0 = v["t0"].as_array().unwrap();
    assert!((t0[0][0].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-12);
    assert!((t0[1][1].as_f64().unwrap() - 0.25).abs() < 1e-12);
    // alias works
    let out2 = bin()
        .args(["cov-diagnostics", "--gamma", "-2", "--s", "0.5", "--v0", "4"])
        .output()
        .unwrap();
    assert_eq!(out2.status.code(), Some(0));
}

fn tiny_solver_config(dir: &Path, extra: &str) -> PathBuf {
    let p = dir.join("solve.toml");
    write(
        &p,
        &format!(
            r#"
[model]
gamma = -1.0
s = 0.7
theta_min = 0.25

[density]
kind = "ball"
radius = 1.2
height = 0.05

[quad]
n_theta = 6
n_phi = 6
n_vstar_radial = 8
n_vstar_angular = 6
plane_radial_nodes = 12
plane_angular_nodes = 8
r_max = 5.0

[solver]
grid_l = 4.0
grid_n = 8
t_end = 0.02
monitor_qs = [5.0]
initial = "mollified"
epsilon = 0.4
{extra}
"#
        ),
    );
    p
}

#[test]
fn solve_writes_trajectory_artifacts() {
    let dir = workdir();
    let cfg = tiny_solver_config(&dir, "");
    let outdir = dir.join("solve-out");
    let out = bin()
        .args(["solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&outdir)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stdout: {} stderr: {}",
        run_ok(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(outdir.join("frame_0000.csv").exists());
    assert!(outdir.join("frame_0000.csv.json").exists());
    assert!(outdir.join("diagnostics.csv").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(outdir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "solve");
    let diag = std::fs::read_to_string(outdir.join("diagnostics.csv")).unwrap();
    assert!(diag.starts_with("t,mass,px,py,pz,energy,entropy,minf,norm_q5"));
    assert!(diag.lines().count() >= 3);
}

#[test]
fn solve_oversized_dt_exits_1() {
    let dir = workdir();
    let cfg = tiny_solver_config(&dir, "dt = 50.0\nnegativity_tol = 1e-6");
    let outdir = dir.join("solve-bad");
    let out = bin()
        .args(["solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&outdir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", run_ok(&out));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(outdir.join("manifest.json")).unwrap())
            .unwrap();
    assert!(manifest["extra"]["termination"]["Stability"].is_object());
}

#[test]
fn barrier_ledger_and_match_check_flow() {
    let dir = workdir();
    let cfg = tiny_solver_config(&dir, "\n[barrier]\nq_base = 5.0\nq_targets = [5.0]\nc0 = 2.0\nv0 = [0.0, 0.0, 0.0]\neta = 0.2");
    // ledger prints JSON with the horizon
    let out = bin()
        .args(["barrier", "ledger", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let ledger: serde_json::Value = serde_json::from_str(&run_ok(&out)).unwrap();
    assert!(ledger["t_f"].as_f64().unwrap() > 0.0);
    // run a short trajectory, then match-check it
    let outdir = dir.join("traj");
    let out = bin()
        .args(["solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&outdir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(["barrier", "match-check", "--traj"])
        .arg(&outdir)
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stdout {} stderr {}",
        run_ok(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&run_ok(&out)).unwrap();
    assert!(report["violation_time"].is_null());
    assert!(report["frames_checked"].as_u64().unwrap() >= 1);
}
