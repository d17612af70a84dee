use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn photolink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photolink"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        cmd,
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    photolink(&args)
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const GATESIM: &str = r#"{ "gatesim": { "n_targets": [1000, 20000], "trials": 20000 } }"#;

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&photolink(&[])), 2);
    assert_eq!(code(&photolink(&["tradeoff", "--out", "x.csv"])), 2);
    assert_eq!(code(&photolink(&["bogus"])), 2);
}

#[test]
fn unknown_key_reports_path_and_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.json", "{\n  \"sweep\": {\n    \"min\": 1, \"max\": 2, \"points\": 3, \"spacing\": \"log\",\n    \"colour\": 1\n  }\n}\n");
    let out = run("tradeoff", &cfg, &dir.path().join("o.csv"), &[]);
    assert_eq!(code(&out), 3);
    let msg = stderr(&out);
    assert!(
        msg.contains("sweep") && msg.contains("colour") && msg.contains("4:"),
        "{msg}"
    );
}

#[test]
fn missing_config_file_is_runtime_error() {
    let dir = TempDir::new().unwrap();
    let out = run(
        "noise",
        &dir.path().join("absent.json"),
        &dir.path().join("o.csv"),
        &[],
    );
    assert_eq!(code(&out), 4);
}

#[test]
fn empty_sweep_range_is_validation_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "noise.json",
        r#"{ "environment": { "impedance": 50, "modulation_depth": 1, "stage_temperature": 4, "cooling_power": 1e-3 },
             "noise": { "responsivity": 0.05, "frequency": 80e9 },
             "sweep": { "min": 2e-3, "max": 1e-3, "points": 5, "spacing": "linear" } }"#,
    );
    assert_eq!(code(&run("noise", &cfg, &dir.path().join("o.csv"), &[])), 3);
}

#[test]
fn noise_grid_starting_at_zero_power() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "noise.json",
        r#"{ "environment": { "impedance": 50, "modulation_depth": 1, "stage_temperature": 4, "cooling_power": 1e-3 },
             "noise": { "responsivity": 0.05, "frequency": 80e9 },
             "sweep": { "min": 0, "max": 2e-3, "points": 3, "spacing": "linear" } }"#,
    );
    let out = dir.path().join("noise.csv");
    let res = run("noise", &cfg, &out, &[]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let t = rows(&out);
    assert_eq!(t[0], ["P0_W", "n_eff_shot", "n_eff_excess_model"]);
    assert_eq!(t.len(), 4);
    assert_eq!(t[1][1].parse::<f64>().unwrap(), 0.0);
    assert!(t[1][2].is_empty());
    let (a, b): (f64, f64) = (t[2][1].parse().unwrap(), t[3][1].parse().unwrap());
    assert!((b / a - 2.0).abs() < 1e-12);
}

#[test]
fn unwritable_output_is_runtime_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "g.json", GATESIM);
    let blocker = write(&dir, "file", "");
    let out = run("gatesim", &cfg, &blocker.join("o.csv"), &["--seed", "1"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn gatesim_needs_a_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "g.json", GATESIM);
    assert_eq!(
        code(&run("gatesim", &cfg, &dir.path().join("o.csv"), &[])),
        3
    );
}

#[test]
fn gatesim_is_reproducible_per_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "g.json", GATESIM);
    let outs: Vec<Vec<u8>> = ["7", "7", "8"]
        .iter()
        .enumerate()
        .map(|(i, seed)| {
            let out = dir.path().join(format!("g{i}.csv"));
            assert_eq!(code(&run("gatesim", &cfg, &out, &["--seed", seed])), 0);
            fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert_ne!(outs[0], outs[2]);
    let t = rows(&dir.path().join("g0.csv"));
    assert_eq!(
        t[0],
        [
            "N_target",
            "trials",
            "mean_error",
            "stderr",
            "analytic_eq10"
        ]
    );
    assert_eq!(t.len(), 3);
}

#[test]
fn chain_with_two_unknown_stages_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{ "chain": { "stages": [
               { "label": "a", "gain_db": null, "nf_db": 1 },
               { "label": "b", "gain_db": null, "nf_db": 2 } ],
             "total_gain": 0.5 } }"#,
    );
    assert_eq!(code(&run("chain", &cfg, &dir.path().join("o.csv"), &[])), 3);
}

#[test]
fn half_quadratic_fit_end_to_end() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "f.json",
        r#"{ "fit": { "model": "half_quadratic", "responsivity": 0.05, "impedance": 50 } }"#,
    );
    let a = 0.020;
    let mut csv = String::from("P0_W,P_W\n");
    for i in 1..=10 {
        let x = i as f64 * 1e-3;
        csv += &format!("{x},{}\n", 0.5 * a * x * x);
    }
    let data = write(&dir, "d.csv", &csv);
    let out = dir.path().join("fit.json");
    let overlay = dir.path().join("overlay.csv");
    let res = run(
        "fit",
        &cfg,
        &out,
        &[
            "--data",
            data.to_str().unwrap(),
            "--overlay",
            overlay.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let report: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report["model"], "half_quadratic");
    assert!((report["params"]["a"].as_f64().unwrap() / a - 1.0).abs() < 1e-12);
    let db = report["extras"]["insertion_loss_db"].as_f64().unwrap();
    assert!((db + 7.96).abs() < 0.01, "{db}");
    let t = rows(&overlay);
    assert_eq!(t[0], ["f", "data", "model"]);
    assert_eq!(t.len(), 11);
}

#[test]
fn resonator_fit_end_to_end() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "r.json",
        r#"{ "fit": { "model": "resonator", "resonator": { "trace": "power" } } }"#,
    );
    let (f0, qi, qe, phi) = (82.348e9, 6e4, 2e3, 0.2);
    let lw = f0 * (1.0 / qi + 1.0 / qe);
    let mut csv = String::from("f_Hz,P_W\n");
    for i in 0..801 {
        let f = f0 + lw * (-4.0 + 0.01 * i as f64);
        let y = photolink_core::fitting::resonator_model(f, f0, qi, qe, phi, 0.0, 2e-12);
        csv += &format!("{f},{y:e}\n");
    }
    let data = write(&dir, "trace.csv", &csv);
    let out = dir.path().join("fit.json");
    let res = run("fit", &cfg, &out, &["--data", data.to_str().unwrap()]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let report: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    let p = &report["params"];
    assert!((p["f0"].as_f64().unwrap() / f0 - 1.0).abs() < 1e-9);
    assert!((p["q_internal"].as_f64().unwrap() / qi - 1.0).abs() < 1e-6);
    assert!((p["q_external"].as_f64().unwrap() / qe - 1.0).abs() < 1e-6);
    assert_eq!(report["covariance"].as_array().unwrap().len(), 5);
}

#[test]
fn flat_trace_is_a_fit_failure() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "r.json", r#"{ "fit": { "model": "resonator" } }"#);
    let csv: String = std::iter::once("f,P\n".to_string())
        .chain((0..200).map(|i| format!("{},1.0\n", 80e9 + i as f64 * 1e6)))
        .collect();
    let data = write(&dir, "flat.csv", &csv);
    let res = run(
        "fit",
        &cfg,
        &dir.path().join("o.json"),
        &["--data", data.to_str().unwrap()],
    );
    assert_eq!(code(&res), 4, "{}", stderr(&res));
}

#[test]
fn malformed_data_row_names_the_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "f.json",
        r#"{ "fit": { "model": "quadratic_offset" } }"#,
    );
    let data = write(&dir, "d.csv", "x,y\n1,2\n2,oops\n3,4\n");
    let res = run(
        "fit",
        &cfg,
        &dir.path().join("o.json"),
        &["--data", data.to_str().unwrap()],
    );
    assert_eq!(code(&res), 3);
    assert!(stderr(&res).contains(":3:"), "{}", stderr(&res));
}
