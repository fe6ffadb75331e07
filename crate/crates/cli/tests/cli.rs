// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use atomnoise::*;

const SMALL: &str = r#"
name = "small"

[drive]
polarization = ["circular", "linear"]
rabi = 1.0
detuning = 0.5

[medium]
b0 = 0.1

[input]
eps_p = 3.0

[grid]
min = 0.0
max = 4.0
count = 9
symmetrize = true

[output]
optical = false
quadrature = 0.3
"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_atomnoise"));
    c.env_remove(atomnoise_cli::OUT_DIR_ENV);
    c
}

fn scenario(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("scenario.toml");
    fs::write(&path, text).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn validate_reports_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let ok = bin().arg("validate").arg(scenario(dir.path(), SMALL)).output().unwrap();
    assert_eq!(code(&ok), 0);
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "ok");

    let warn = bin().arg("validate").arg(scenario(dir.path(), &SMALL.replace("b0 = 0.1", "b0 = 5"))).output().unwrap();
    assert_eq!(code(&warn), 0);
    assert!(String::from_utf8_lossy(&warn.stdout).contains("outside single-scattering validity"));

    let bad = bin().arg("validate").arg(scenario(dir.path(), &SMALL.replace("eps_p = 3.0", "eps_p = -1"))).output().unwrap();
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stdout).contains("error: input.eps_p"));
}

#[test]
fn parse_error_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("rabi = 1.0", "rabi = = 1.0");
    let out = bin().arg("run").arg(scenario(dir.path(), &text)).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 6"), "{}", stderr(&out));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn degenerate_point_exits_with_compute_code() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{SMALL}\n[sweep]\naxis = \"rabi\"\nvalues = [1.0, 0.0]\n");
    let out = bin().arg("run").arg(scenario(dir.path(), &text)).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("small_circular_rabi_0"), "{}", stderr(&out));
}

#[test]
fn unwritable_output_exits_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = bin().arg("run").arg(scenario(dir.path(), SMALL)).arg("--out").arg(blocker.join("o")).output().unwrap();
    assert_eq!(code(&out), 4);
    let missing = bin().arg("run").arg(dir.path().join("absent.toml")).output().unwrap();
    assert_eq!(code(&missing), 4);
}

#[test]
fn environment_sets_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_env");
    let out = bin()
        .arg("run")
        .arg(scenario(dir.path(), SMALL))
        .env(atomnoise_cli::OUT_DIR_ENV, &target)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for f in ["small_circular.csv", "small_linear.csv", "small.json"] {
        assert!(target.join(f).exists(), "{f}");
    }
}

#[test]
fn unrequested_observables_are_empty_and_thread_count_is_irrelevant() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario(dir.path(), SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(code(&bin().arg("run").arg(&path).arg("--out").arg(&a).arg("--threads").arg("1").output().unwrap()), 0);
    assert_eq!(code(&bin().arg("run").arg(&path).arg("--out").arg(&b).arg("--threads").arg("3").output().unwrap()), 0);
    for f in ["small_circular.csv", "small_linear.csv", "small.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let table = fs::read_to_string(a.join("small_linear.csv")).unwrap();
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), 1 + 17);
    for row in &rows[1..] {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 8);
        assert!(f[1].is_empty() && f[2].is_empty() && f[5].is_empty() && f[6].is_empty() && f[7].is_empty());
        assert!(f[3].parse::<f64>().is_ok() && f[4].parse::<f64>().is_ok());
    }
}

#[test]
fn metadata_reproduces_table() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("o");
    let out = bin().arg("run").arg(scenario(dir.path(), SMALL)).arg("--out").arg(&out_dir).output().unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("small.json")).unwrap()).unwrap();
    assert_eq!(meta["conventions_version"], "1");
    assert_eq!(meta["quadrature_convention"]["reference"], "relative");

    let t = &meta["transition"];
    let scheme = LevelScheme::with_gamma(t["fg"].as_f64().unwrap(), t["fe"].as_f64().unwrap(), t["gamma"].as_f64().unwrap())
        .unwrap();
    for table in meta["tables"].as_array().unwrap() {
        let p = &table["params"];
        let get = |k: &str| p[k].as_f64().unwrap();
        let mode = match table["mode"].as_str().unwrap() {
            "circular" => PolarizationMode::Circular,
            _ => PolarizationMode::Linear,
        };
        let csv = fs::read_to_string(out_dir.join(table["file"].as_str().unwrap())).unwrap();
        let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
        let grid: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
        let sim = simulate(
            &scheme,
            &DriveConfig::new(mode, get("rabi"), get("detuning")).unwrap(),
            &MediumParams::new(get("b0")).unwrap(),
            &InputField::new(InputNoise::new(get("eps_a"), get("eps_p")).unwrap()),
            &grid,
        )
        .unwrap();
        let theta = table["quadrature_angle"].as_f64().unwrap();
        let carrier = amplitude_quadrature_angle(sim.output.driven.carrier).unwrap();
        assert_eq!(theta, carrier + 0.3);
        let e1 = quadrature_noise(&sim.output.driven.total, theta).unwrap();
        let e2 = quadrature_noise(&sim.output.orthogonal.total, theta).unwrap();
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r[3].parse::<f64>().unwrap(), e1.values[k]);
            assert_eq!(r[4].parse::<f64>().unwrap(), e2.values[k]);
        }
    }
}

#[test]
fn preset_text_is_printed() {
    let out = bin().args(["preset", "fig5"]).output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), atomnoise_cli::presets::text("fig5").unwrap());
    let unknown = bin().args(["run", "--preset", "fig9"]).output().unwrap();
    assert_eq!(code(&unknown), 2);
}
