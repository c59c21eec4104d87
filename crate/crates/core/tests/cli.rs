use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_selberg-bounds"));
    c.env_remove("SELBERG_BOUNDS_CONFIG");
    c
}

fn bolza_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../config/bolza.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn surface_constants() {
    let out = run(&["constants", "--n", "2", "--epsilon", "2asinh1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cs = v["surface"]["constants"].as_array().unwrap();
    let get = |name: &str| {
        cs.iter().find(|c| c["name"] == name).unwrap()["value"]
            .as_f64()
            .unwrap()
    };
    assert!((get("C'(tanh(pi r))") - 10.1391).abs() <= 5e-4);
    assert!((get("U(tanh(pi r))") - 63.71).abs() <= 0.01);
    assert!(v["upper"]["unavailable"].is_string());
}

#[test]
fn constants_degrade_without_w() {
    let out = run(&["constants", "--n", "3", "--delta", "0.5", "--tol", "1e-7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A_n.value: "));
    assert!(text.contains("upper.unavailable: external constant W is not configured for n = 3"));
}

#[test]
fn config_from_env_and_csv_out() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let out = bin()
        .env("SELBERG_BOUNDS_CONFIG", bolza_config())
        .args(["constants", "--n", "2", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&csv).unwrap();
    assert!(body.starts_with("key,value\n"));
    assert!(body.contains("upper.b.value,"));
}

#[test]
fn bound_reports_branches() {
    let cfg = bolza_config();
    let cfg = cfg.to_str().unwrap();
    let out = run(&[
        "--config",
        cfg,
        "--format",
        "json",
        "bound",
        "--n",
        "2",
        "--vol",
        "12.566370614359172",
        "--sys",
        "3.0571418390",
        "--l",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v["kiss"]["branches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["main", "thin", "surface"]);
    for key in [
        "interval_upper",
        "interval_lower",
        "cumulative_upper",
        "cumulative_lower",
    ] {
        assert!(v[key]["value"].is_number(), "{key}");
    }
}

#[test]
fn domain_and_config_errors_exit_2() {
    let cfg = bolza_config();
    let cfg = cfg.to_str().unwrap();
    let out = run(&["--config", cfg, "bound", "--n", "2", "--vol", "1", "--sys", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("below the volume lower bound"));

    let out = run(&[
        "--config",
        cfg,
        "spectrum",
        "--group",
        "nope",
        "--lmax",
        "5",
        "--no-files",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("configured groups: bolza"));

    let out = run(&["--config", "/nonexistent.json", "constants", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["constants"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "bounds"]).status.code(), Some(2));
}

#[test]
fn spectrum_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("--config")
        .arg(bolza_config())
        .args([
            "--format", "json", "spectrum", "--group", "bolza", "--lmax", "6.5", "--dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["systole"].as_f64().unwrap() - 3.05714).abs() < 1e-5);
    assert_eq!(v["kissing_number"], 24);
    assert_eq!(v["complete"], true);
    let csv = std::fs::read_to_string(dir.path().join("bolza-spectrum.csv")).unwrap();
    assert!(csv.starts_with("length,multiplicity,primitive,word\n3.057141838962,24,true,"));
    let full: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bolza-spectrum.json")).unwrap()).unwrap();
    assert_eq!(full["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn shallow_spectrum_is_flagged() {
    let out = bin()
        .arg("--config")
        .arg(bolza_config())
        .args([
            "--format",
            "json",
            "spectrum",
            "--group",
            "bolza",
            "--lmax",
            "8",
            "--depth",
            "5",
            "--no-files",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["complete"], false);
    assert_eq!(v["completeness"]["kind"], "heuristic");
}

#[test]
fn verify_signs_passes() {
    let out = run(&["verify", "--suite", "signs", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn verify_is_reproducible() {
    let args = [
        "verify", "--suite", "holonomy", "--trials", "2000", "--seed", "7", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "verify", "--suite", "holonomy", "--trials", "2000", "--seed", "8", "--format", "json",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_li_reports_failure() {
    let out = run(&["verify", "--suite", "li", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failing: Vec<f64> = v["suites"][0]["detail"]["sandwich"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["convention"] == "standard" && !(c["lower_holds"] == true && c["upper_holds"] == true))
        .map(|c| c["x"].as_f64().unwrap())
        .collect();
    assert_eq!(failing, [100.0, 10000.0]);
}

#[test]
fn verify_bounds_on_bolza() {
    let out = bin()
        .arg("--config")
        .arg(bolza_config())
        .args(["--format", "json", "verify", "--suite", "bounds", "--group", "bolza"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(
        v["suites"][0]["detail"]["validation"]["kiss"]["verdict"]["observed"],
        24.0
    );
}
