use std::process::{Command, Output};

use crosspoly_cli::sweep::{read_csv, Status};

fn crosspoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crosspoly"))
        .args(args)
        .env_remove("CROSSPOLY_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_line(o: &Output) -> f64 {
    let out = stdout(o);
    let line = out.lines().find(|l| l.starts_with("value")).expect("value line");
    line.split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[test]
fn compute_examples() {
    let o = crosspoly(&["compute", "hyp-volume", "--n", "3", "--normal", "1,0,0", "--t", "0.8"]);
    assert!(o.status.success());
    assert!((value_line(&o) - 0.08).abs() < 1e-15);

    let o = crosspoly(&["compute", "line-length", "--p1", "1,0,0", "--p2", "-1,0,0"]);
    assert!(o.status.success());
    assert_eq!(value_line(&o), 2.0);

    let o = crosspoly(&["compute", "slab-volume", "--normal", "0.9,0.3,0.316227766", "--t", "0.75"]);
    assert!(o.status.success());
    assert!((value_line(&o) - 1.3254107).abs() < 1e-7);

    let o = crosspoly(&["compute", "line-length", "--base", "0,0.5,0", "--dir", "1,0,0", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((json["value"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn regime_and_usage_errors_exit_two() {
    let o = crosspoly(&["compute", "hyp-volume", "--normal", "1,0,0", "--t", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1/sqrt(2)"));
    assert_eq!(crosspoly(&["compute", "line-length"]).status.code(), Some(2));
    assert_eq!(crosspoly(&["nonsense"]).status.code(), Some(2));
    assert_eq!(crosspoly(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_csv_round_trips_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("max.csv");
    let o = crosspoly(&[
        "sweep", "--quantity", "max-line", "--n", "2:4", "--t-step", "0.05", "--output", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&out).unwrap();
    let rows = read_csv(bytes.as_slice()).unwrap();
    assert_eq!(rows.len(), 3 * 21);
    let mut again = Vec::new();
    crosspoly_cli::sweep::write_csv(&rows, &mut again).unwrap();
    assert_eq!(again, bytes);

    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("max.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 42);
    assert_eq!(manifest["provenance"].as_array().unwrap().len(), rows.len());
    assert!(manifest["timestamp"].as_str().unwrap().ends_with('Z'));
}

#[test]
fn sweep_keeps_out_of_regime_rows() {
    let o = crosspoly(&["sweep", "--quantity", "min-slab", "--n", "3", "--t-start", "0.6", "--t-stop", "1", "--t-step", "0.1"]);
    assert!(o.status.success());
    let rows = read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0].status, Status::OutOfRegime);
    assert_eq!(rows[1].status, Status::OutOfRegime);
    assert!(rows[2..].iter().all(|r| r.status == Status::Ok));
}

#[test]
fn min_line_sweep_shows_thresholds() {
    let o = crosspoly(&["sweep", "--quantity", "min-line", "--n", "4", "--t-step", "0.01", "--format", "json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut branches: Vec<String> = Vec::new();
    for row in doc["rows"].as_array().unwrap() {
        let b = row["branch"].as_str().unwrap().to_string();
        if branches.last() != Some(&b) {
            branches.push(b);
        }
    }
    assert_eq!(branches, ["facet-to-facet", "k=3", "k=2", "k=1", "disjoint"]);
    assert!(doc["manifest"]["config"]["quantity"] == "min-line");
}

#[test]
fn sweep_config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "quantity = \"max-line\"\nn = 3\nt_start = 0.5\nt_stop = 0.5\nseed = 9\nformat = \"json\"\n").unwrap();
    let o = crosspoly(&["sweep", "--config", cfg.to_str().unwrap(), "--seed", "11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["manifest"]["seed"], 11);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);

    let o = Command::new(env!("CARGO_BIN_EXE_crosspoly"))
        .args(["sweep", "--quantity", "simplex-min", "--n", "3", "--format", "json"])
        .env("CROSSPOLY_SEED", "5")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["manifest"]["seed"], 5);
}

#[test]
fn verify_is_deterministic_and_notices_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let j1 = dir.path().join("a.json");
    let j2 = dir.path().join("b.json");
    let a = crosspoly(&["verify", "--level", "quick", "--seed", "42", "--json", j1.to_str().unwrap()]);
    let b = crosspoly(&["verify", "--level", "quick", "--seed", "42", "--json", j2.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(&j1).unwrap(), std::fs::read(&j2).unwrap());
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert!(stdout(&a).trim_end().ends_with("overall: PASS"));
    let criterion_one = |o: &Output| stdout(o).lines().find(|l| l.contains("  1 ")).unwrap().to_string();
    assert!(criterion_one(&a).starts_with("[PASS]"), "{}", stdout(&a));

    let t = crosspoly(&["verify", "--level", "quick", "--seed", "42", "--tamper"]);
    assert_eq!(t.status.code(), Some(1));
    assert!(criterion_one(&t).starts_with("[FAIL]"), "{}", stdout(&t));
}
