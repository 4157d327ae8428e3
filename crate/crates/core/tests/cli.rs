use std::path::Path;
use std::process::Command;

fn sheathlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sheathlab")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = r#"
[params]
epsilon = 0.02
final_time = 0.01

[grid]
bulk_dx = 0.005

[experiment]
kind = "solve"
eps_sweep = [0.04, 0.02, 0.01]
snapshot_every = 0.005
"#;

#[test]
fn classify_prints_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = sheathlab(&["classify", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("Density, Potential and Velocity"));
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("classification.json")).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
}

#[test]
fn profile_writes_csv_and_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = sheathlab(&["profile", "--Ti", "1", "--u3", "-2", "--phi0", "0.1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("z,Phi0,N0,U03,Phi1"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!((report["gamma"].as_f64().unwrap() - 0.816_496_580_927_726).abs() < 1e-12);
    assert!(report["relative_decay_error"].as_f64().unwrap() < 0.03);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sheathlab(&["--config", "/nonexistent/experiment.toml", "converge"]).0, 2);
    let bad = write_config(dir.path(), "[experiment]\nkind = \"converge\"\neps_sweep = [0.01, 0.02, 0.04]\n");
    assert_eq!(sheathlab(&["--config", &bad, "converge"]).0, 2);
    let good = write_config(dir.path(), "[experiment]\nkind = \"converge\"\n");
    assert_eq!(sheathlab(&["--config", &good, "converge", "--regime", "intermediate"]).0, 2);
    assert_eq!(sheathlab(&["converge", "--regime", "subsonic"]).0, 2);
}

#[test]
fn solver_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = sheathlab(&["profile", "--u3", "-1.2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn identical_configs_give_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let (code, _) = sheathlab(&["--config", &cfg, "--out", out.to_str().unwrap(), "solve"]);
        assert_eq!(code, 0);
        outputs.push((std::fs::read(out.join("solution.csv")).unwrap(), std::fs::read(out.join("report.json")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().next(), Some("t,x3,n,u1,u2,u3,phi"));
}

#[test]
fn converge_writes_rates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("kind = \"solve\"", "kind = \"converge\""));
    let out = dir.path().join("rates");
    let (code, stdout) = sheathlab(&["--config", &cfg, "--out", out.to_str().unwrap(), "converge", "--check"]);
    assert!(code == 0 || code == 4, "{code}");
    assert_eq!(code == 0, !stdout.contains("FAIL"));
    let rates = std::fs::read_to_string(out.join("rates.csv")).unwrap();
    let lines: Vec<&str> = rates.lines().collect();
    assert_eq!(lines[0], "eps,err_L2_n,err_L2_u,err_Linf_raw,err_Linf_corrected");
    assert_eq!(lines.len(), 4);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["report"]["eps"].as_array().unwrap().len(), 3);
}
