use std::path::Path;
use std::process::{Command, Output};

use keygraph_cli::manifest::{config_hash, RunManifest};

const FIG1: &str = r#"{"r":2,"mu":[0.5,0.5],"K1":20,"offsets":[0,5],"P":10000,
  "alpha":[0.3,0.2,0.2,0.3],"n":500,"trials":20,"seed":3,
  "sweep":{"axis":"K1","values":[18,20,22]}}"#;

fn keygraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keygraph"))
        .args(args)
        .env_remove("KEYGRAPH_WORKERS")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn edge_prob_figure1_reports_m_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", FIG1);
    let out = keygraph(&["edge-prob", "--config", &cfg]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("m=1 "));
}

#[test]
fn malformed_mu_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"r":2,"mu":[0.5,0.7],"K":[2,3],"P":10,"alpha":[1,1,1,1]}"#,
    );
    let out = keygraph(&["edge-prob", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config.mu"));
}

#[test]
fn threshold_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", FIG1);
    let out = keygraph(&["threshold", "--config", &cfg]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("K1*=22\n"));

    let zero = FIG1.replace("[0.3,0.2,0.2,0.3]", "[0,0,0,0]");
    let cfg = write(dir.path(), "z.json", &zero);
    let out = keygraph(&["threshold", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));

    let out = keygraph(&["threshold", "--config", &cfg, "--offsets", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let out = keygraph(&["edge-prob", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sweep_writes_deterministic_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", FIG1);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, workers) in [(&a, "1"), (&b, "3")] {
        let out = keygraph(&[
            "--workers",
            workers,
            "sweep",
            "--config",
            &cfg,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let csv = std::fs::read_to_string(&a).unwrap();
    assert_eq!(csv, std::fs::read_to_string(&b).unwrap());
    assert_eq!(csv.lines().count(), 4);
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 10);
        assert!(f[5].parse::<f64>().unwrap() <= f[6].parse::<f64>().unwrap());
    }

    let manifest: RunManifest =
        serde_json::from_slice(&std::fs::read(RunManifest::path_for(&a)).unwrap()).unwrap();
    assert_eq!(manifest.config_sha256, config_hash(FIG1.as_bytes()));
    assert_eq!(manifest.master_seed, 3);
    assert_eq!(manifest.output, "a.csv");
    assert!(manifest.command.iter().any(|c| c == "sweep"));
}

#[test]
fn sweep_without_section_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut body: serde_json::Value = serde_json::from_str(FIG1).unwrap();
    body.as_object_mut().unwrap().remove("sweep");
    let cfg = write(dir.path(), "c.json", &body.to_string());
    let out_path = dir.path().join("x.csv");
    let out = keygraph(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists());
}

#[test]
fn worker_count_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", FIG1);
    let out = Command::new(env!("CARGO_BIN_EXE_keygraph"))
        .args(["edge-prob", "--config", &cfg])
        .env("KEYGRAPH_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_scaling_preset_and_fixed_family() {
    let out = keygraph(&["check-scaling"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,K,P,m,lambda_m,c_n,pool_ratio,edge_floor,ring_spread,channel_spread"
    );
    for line in lines {
        let c_n: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!(c_n > 1.0, "{line}");
    }

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", FIG1);
    let report = dir.path().join("s.csv");
    let out = keygraph(&[
        "check-scaling",
        "--config",
        &cfg,
        "--grid",
        "100,1000,10000",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("c_n: "));
    assert_eq!(std::fs::read_to_string(&report).unwrap().lines().count(), 4);
    assert!(RunManifest::path_for(&report).exists());

    let out = keygraph(&["check-scaling", "--grid", "1,1000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hidden_oracle_matches_formula() {
    let out = keygraph(&[
        "oracle", "key-prob", "--ki", "3", "--kj", "4", "--pool", "10",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let diff: f64 = text.trim().rsplit('=').next().unwrap().parse().unwrap();
    assert!(diff < 1e-12, "{text}");
    let help = stdout(&keygraph(&["--help"]));
    assert!(!help.contains("oracle"));
}

#[test]
fn figure_rejects_unknown_id() {
    let dir = tempfile::tempdir().unwrap();
    let out = keygraph(&[
        "figure",
        "--id",
        "5",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure4_zero_cross_channel_never_connects() {
    let dir = tempfile::tempdir().unwrap();
    let out = keygraph(&[
        "figure",
        "--id",
        "4",
        "--trials",
        "20",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mut files = 0;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            files += 1;
            let csv = std::fs::read_to_string(&path).unwrap();
            let first = csv.lines().nth(1).unwrap();
            assert!(first.starts_with("0,500,20,0,"), "{first}");
            assert_eq!(csv.lines().count(), 22);
        }
    }
    assert_eq!(files, 4);
}
