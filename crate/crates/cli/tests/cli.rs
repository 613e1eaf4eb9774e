use std::path::Path;
use std::process::{Command, Output};

use udw_cli::presets::{aliases, preset, presets};
use udw_cli::runner::{compute, resolve_tolerance};
use udw_cli::scenario::Scenario;

fn udw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udw")).args(args).env_remove("UDW_DEFAULT_TOL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

const CONFIG: &str = r#"{
  "name": "linear scan",
  "kind": "linear_one",
  "params": {"n": 3, "k0": 1, "sigma": 0.5, "lambda": 1},
  "sweep": {"variable": "omega", "min": 0.5, "max": 2, "points": 4}
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn list_presets_includes_fig1_n3() {
    let o = udw(&["list-presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("fig1_n3"));
    assert!(text.lines().count() >= 14);
}

#[test]
fn presets_round_trip_through_json() {
    for p in presets() {
        let s = preset(p.name).unwrap();
        let back = Scenario::from_json(&s.to_json(), p.name).unwrap();
        assert_eq!(back, s, "{}", p.name);
    }
    assert!(presets().len() >= 14);
    assert_eq!(aliases().len(), 2);
}

#[test]
fn run_writes_csv_with_sorted_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", CONFIG);
    let out = dir.path().join("o.csv");
    let o = udw(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "k0,lambda,n,omega,sigma,value,i_minus,error_estimate");
    assert_eq!(lines.count(), 4);
    assert_eq!(column(&csv, "omega"), vec![0.5, 1.0, 1.5, 2.0]);
}

#[test]
fn run_to_stdout_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = CONFIG.replace("\"sweep\"", "\"output\": {\"format\": \"json\"},\n  \"sweep\"");
    let cfg = write(dir.path(), "c.json", &json);
    let o = udw(&["run", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1]["omega"], 1.0);
    assert!(rows[1]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn validate_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", CONFIG);
    let o = udw(&["validate", &good]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("4 points"));

    let empty = write(dir.path(), "empty.json", &CONFIG.replace("\"points\": 4", "\"points\": 0"));
    let o = udw(&["validate", &empty]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("sweep.points"), "{}", stderr(&o));

    let broken = write(dir.path(), "broken.json", &CONFIG.replace("\"n\": 3,", "\"n\": 3"));
    let o = udw(&["run", &broken]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn numerical_failure_names_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cav.json",
        r#"{
  "name": "starved cavity",
  "kind": "cavity_one",
  "params": {"n": 1, "l": 10, "t": 20, "x_frac": 0.5, "j0_1": 3, "omega": 1, "lambda": 1, "mode_cap": 6},
  "sweep": {"variable": "sigma", "min": 0.01, "max": 1, "points": 3}
}"#,
    );
    let o = udw(&["run", &cfg]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("grid point") && err.contains("sigma="), "{err}");
}

#[test]
fn unknown_preset_fails() {
    let o = udw(&["preset", "fig9"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("fig9"));
}

#[test]
fn fig1_n3_maxima_decrease_with_sigma() {
    let o = udw(&["preset", "fig1_n3"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let sigma = column(&csv, "sigma");
    let value = column(&csv, "value");
    let mut maxima: Vec<(f64, f64)> = Vec::new();
    for (s, v) in sigma.into_iter().zip(value) {
        match maxima.last_mut() {
            Some((ls, lv)) if *ls == s => *lv = lv.max(v),
            _ => maxima.push((s, v)),
        }
    }
    assert_eq!(maxima.iter().map(|m| m.0).collect::<Vec<_>>(), vec![1.0, 0.5, 0.25]);
    assert!(maxima.windows(2).all(|w| w[1].1 < w[0].1), "{maxima:?}");
}

#[test]
fn fig5_sfg_peaks_near_four() {
    let o = udw(&["preset", "fig5_sfg"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let omega = column(&csv, "omega");
    let p_r = column(&csv, "p_r");
    let best = (0..p_r.len()).max_by(|&a, &b| p_r[a].total_cmp(&p_r[b])).unwrap();
    assert!((omega[best] - 4.0).abs() < 0.6, "argmax {}", omega[best]);
}

#[test]
fn deposit_preset_zeroes_even_modes() {
    let o = udw(&["preset", "deposits_quadratic"]);
    let csv = stdout(&o);
    let j = column(&csv, "j");
    let v = column(&csv, "value");
    for (j, v) in j.iter().zip(&v) {
        if *j as u32 % 2 == 0 {
            assert_eq!(*v, 0.0);
        }
    }
}

#[test]
fn tolerance_precedence() {
    let mut s = Scenario::from_json(CONFIG, "t").unwrap();
    assert_eq!(resolve_tolerance(Some(1e-5), &s).unwrap(), 1e-5);
    s.rel_tol = Some(1e-6);
    assert_eq!(resolve_tolerance(None, &s).unwrap(), 1e-6);
    assert!(resolve_tolerance(Some(2.0), &s).is_err());
}

#[test]
fn env_default_tolerance_applies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", CONFIG);
    let out = dir.path().join("o.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_udw"))
        .args(["run", &cfg, "--out", out.to_str().unwrap()])
        .env("UDW_DEFAULT_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stderr(&o).contains("rel_tol 1e-6"), "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_udw"))
        .args(["run", &cfg])
        .env("UDW_DEFAULT_TOL", "lots")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(stderr(&o).contains("UDW_DEFAULT_TOL"));
}

#[test]
fn output_independent_of_worker_count() {
    let s = preset("fig6_n2").unwrap();
    let a = compute(&s, 1e-7, Some(1)).unwrap().render(s.output.format);
    let b = compute(&s, 1e-7, Some(3)).unwrap().render(s.output.format);
    assert_eq!(a, b);
}
