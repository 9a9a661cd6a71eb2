use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn photocount(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photocount"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn simulate_is_byte_identical_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str, seed: &'static str| {
        vec![
            "simulate", "--state", "thermal", "--mean-photons", "0.7", "--noise", "0.3", "--n",
            "2e4", "--seed", seed, "--out", out,
        ]
    };
    for (out, seed) in [("a.csv", "5"), ("b.csv", "5"), ("c.csv", "6")] {
        let o = photocount(dir.path(), &args(out, seed));
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));
}

#[test]
fn analyze_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    photocount(d, &["simulate", "--state", "coherent", "--mean-photons", "0.5", "--n", "1e4", "--out", "x.csv"]);
    for out in ["r1.json", "r2.json"] {
        let o = photocount(d, &["analyze", "--input", "x.csv", "--bootstrap", "100", "--seed", "9", "--out", out]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(
        std::fs::read(d.join("r1.json")).unwrap(),
        std::fs::read(d.join("r2.json")).unwrap()
    );
}

#[test]
fn squeezed_pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = photocount(d, &["simulate", "--state", "squeezed", "--r", "0.5", "--n", "2e5", "--seed", "1", "--out", "sq.csv"]);
    assert_eq!(code(&o), 0);
    assert!(d.join("sq.meta.json").exists());
    assert_eq!(read_json(&d.join("sq.run.json"))["n"], 200_000);

    let o = photocount(d, &["analyze", "--input", "sq.csv", "--out", "rep.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read_json(&d.join("rep.json"));
    let fano = rep["fano"].as_f64().unwrap();
    assert!((fano - 2.543).abs() < 0.15, "fano {fano}");
    assert!(rep["errors"]["n_mean"].as_f64().unwrap() > 0.0);

    let o = photocount(d, &["classify", "--input", "rep.json", "--boundary", "b.csv", "--points", "11", "--surface", "s.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let verdicts = read_json(&d.join("classification.json"));
    assert!(verdicts["overall"].is_string());
    let boundary = std::fs::read_to_string(d.join("b.csv")).unwrap();
    assert!(boundary.starts_with("n,boundary\n"));
    assert_eq!(boundary.lines().count(), 12);
    let surface = std::fs::read_to_string(d.join("s.csv")).unwrap();
    assert!(surface.starts_with("n,var,boundary\n"));
    assert_eq!(surface.lines().count(), 122);
    let resolved = read_json(&d.join("classification.run.json"));
    assert_eq!(resolved["k_sigma"], 3.0);
    assert_eq!(resolved["command"], "classify");
}

#[test]
fn reference_subtraction_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    photocount(d, &["simulate", "--state", "coherent", "--mean-photons", "0.5", "--noise", "2", "--n", "1e5", "--seed", "1", "--out", "on.csv"]);
    photocount(d, &["simulate", "--state", "vacuum", "--noise", "2", "--n", "1e5", "--seed", "2", "--out", "off.csv"]);
    let o = photocount(d, &["analyze", "--input", "on.csv", "--reference", "off.csv", "--bootstrap", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read_json(&d.join("report.json"));
    assert!((rep["n_mean"].as_f64().unwrap() - 0.5).abs() < 0.05);
    assert!(rep["errors"].is_null());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("cfg.json"),
        r#"{"command": "simulate", "state": {"kind": {"name": "coherent", "mean_photons": 1.0}},
            "n": 1000, "seed": 1, "out": "from_cfg.csv"}"#,
    )
    .unwrap();
    let o = photocount(d, &["simulate", "--config", "cfg.json", "--seed", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let resolved = read_json(&d.join("from_cfg.run.json"));
    assert_eq!(resolved["seed"], 2);
    assert_eq!(resolved["n"], 1000);
    assert_eq!(resolved["phase"]["mode"], "averaged");
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("typo.json"), r#"{"sede": 3}"#).unwrap();
    let o = photocount(d, &["simulate", "--config", "typo.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown field `sede`"));

    std::fs::write(d.join("other.json"), r#"{"command": "analyze"}"#).unwrap();
    assert_eq!(code(&photocount(d, &["simulate", "--config", "other.json", "--state", "vacuum"])), 2);

    assert_eq!(code(&photocount(d, &["simulate"])), 2);
    assert_eq!(code(&photocount(d, &["simulate", "--state", "coherent"])), 2);
    assert_eq!(code(&photocount(d, &["simulate", "--state", "vacuum", "--n", "1.5"])), 2);
    assert_eq!(code(&photocount(d, &["simulate", "--state", "thermal", "--mean-photons", "-1"])), 2);
}

#[test]
fn missing_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = photocount(dir.path(), &["analyze", "--input", "absent.csv"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent"));
}

#[test]
fn wideband_report_and_aliasing_guard() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = photocount(d, &["simulate", "--pulse", "gaussian", "--carrier", "5e9", "--sigma-t", "5e-9", "--out", "tr.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = photocount(d, &["wideband", "--input", "tr.csv", "--nu0", "5e9", "--quadratures", "xp.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read_json(&d.join("wideband.json"));
    let ratio = rep["ratio_to_hnu0"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
    assert!(rep["energy_J"].as_f64().unwrap() > 0.0);
    assert!(std::fs::read_to_string(d.join("xp.csv")).unwrap().starts_with("t,x,p\n"));

    let o = photocount(d, &["wideband", "--input", "tr.csv", "--nu0", "1e10"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("undersampled"));
}

#[test]
fn verify_oracle_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = photocount(dir.path(), &["verify-oracle", "--out", "checks.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().all(|l| l.starts_with("[PASS]")));
    let checks = read_json(&dir.path().join("checks.json"));
    assert!(checks.as_array().unwrap().len() >= 12);
}
