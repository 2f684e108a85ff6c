use std::path::Path;
use std::process::Command;

fn inducing(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_inducing"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(Result::unwrap).collect()
}

#[test]
fn curve_stays_above_tangent_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = inducing(
        &[
            "curve",
            "builtin:renewal?beta=0.3",
            "--psi",
            "indicator1",
            "--t-grid",
            "-0.5:0.5:0.05",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = read_csv(&dir.path().join("curve.csv"));
    assert_eq!(rows.len(), 21);
    for r in rows {
        let p: f64 = r[1].parse().unwrap();
        let q: f64 = r[2].parse().unwrap();
        assert!(p >= q - 1e-9);
    }
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn gibbs_json_has_unit_mass() {
    let dir = tempfile::tempdir().unwrap();
    let out = inducing(&["gibbs", "builtin:weighted-infinite?beta=0.3"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("gibbs.json")).unwrap()).unwrap();
    assert!((v["total_mass"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn stats_decay_writes_lag_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = inducing(
        &[
            "stats",
            "decay",
            "builtin:renewal?beta=0.3",
            "--seed",
            "5",
            "--length",
            "20000",
            "--lag-max",
            "8",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = read_csv(&dir.path().join("decay.csv"));
    assert_eq!(rows.len(), 9);
}

#[test]
fn gamma_exact_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = inducing(
        &[
            "liftability",
            "gamma",
            "--n",
            "3",
            "--big-n",
            "1",
            "--delta",
            "0.4",
            "--exact",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("gamma.json")).unwrap()).unwrap();
    assert_eq!(v["exact"]["exact"], 3);
}

#[test]
fn usage_and_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(inducing(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        inducing(&["gibbs", "builtin:renewal", "--cut", "0"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        inducing(&["gibbs", "builtin:nonesuch"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn replay_reproduces_reports() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let out = inducing(
        &[
            "stats",
            "clt",
            "builtin:renewal?beta=0.3",
            "--seed",
            "3",
            "--length",
            "50000",
            "--blocks",
            "50",
        ],
        a.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let manifest = a.path().join("manifest.json");
    let replay = Command::new(env!("CARGO_BIN_EXE_inducing"))
        .arg("replay")
        .arg(&manifest)
        .arg("--out")
        .arg(b.path())
        .output()
        .unwrap();
    assert!(replay.status.success());
    for f in ["clt.csv", "clt.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap()
        );
    }
}

#[test]
fn set_pressure_of_full_shift_matches_log_partition() {
    let dir = tempfile::tempdir().unwrap();
    let out = inducing(
        &[
            "liftability",
            "set-pressure",
            "--phi-values",
            "-0.2,0.4",
            "--schedule",
            "8,16",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("set_pressure.json")).unwrap())
            .unwrap();
    let exact = ((-0.2f64).exp() + 0.4f64.exp()).ln();
    assert!((v["estimate"].as_f64().unwrap() - exact).abs() < 0.01);
    assert_eq!(v["status"], "upper-bound");
}
