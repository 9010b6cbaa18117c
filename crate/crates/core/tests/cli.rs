use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cscool::model::Model;
use cscool::params::{format_config, parse_config};
use cscool::SystemConfig;

fn cscool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cscool")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

fn write_reference(dir: &Path) -> String {
    let p = dir.join("ref.cfg");
    fs::write(&p, format_config(&SystemConfig::reference())).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(cscool(&["--help"]).status.code(), Some(0));
    assert_eq!(cscool(&["--version"]).status.code(), Some(0));
    assert_eq!(cscool(&["bogus"]).status.code(), Some(2));
}

#[test]
fn derive_reports_trap_frequencies_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_reference(dir.path());
    let out = cscool(&["derive", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let expected = [0.12e6, 0.14e6, 0.04e6];
    for (ax, f) in ["x", "y", "z"].iter().zip(expected) {
        let key = format!("# Omega_prime_{ax} = ");
        let line = text.lines().find(|l| l.starts_with(&key)).unwrap();
        let v: f64 = line[key.len()..].split_whitespace().next().unwrap().parse().unwrap();
        assert!((v / f - 1.0).abs() < 0.05, "{ax}: {v}");
    }
    let back = parse_config(&text).unwrap();
    let (a, b) = (Model::build(&back).unwrap(), Model::build(&SystemConfig::reference()).unwrap());
    for j in 0..3 {
        assert!((a.coeffs.omega_prime[j] / b.coeffs.omega_prime[j] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn steady_z_temperature_at_cavity_node() {
    let out = cscool(&["steady", "--pressure", "1e-5mbar", "--phi", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let tz = column(&stdout(&out), "T_z")[0];
    assert!(tz > 0.03 && tz < 0.12, "T_z = {tz}");
}

#[test]
fn missing_key_exits_two_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = format_config(&SystemConfig::reference())
        .lines()
        .filter(|l| !l.starts_with("cavity_length"))
        .map(|l| format!("{l}\n"))
        .collect();
    let p = dir.path().join("broken.cfg");
    fs::write(&p, text).unwrap();
    let out = cscool(&["steady", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cavity_length"), "{}", stderr(&out));
}

#[test]
fn bad_quantity_exits_two() {
    assert_eq!(cscool(&["steady", "--pressure", "lots"]).status.code(), Some(2));
    assert_eq!(cscool(&["steady", "--power", "3 parsecs"]).status.code(), Some(2));
}

#[test]
fn unstable_setting_exits_three_with_name() {
    let out = cscool(&["steady", "--detuning", "-400kHz"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("Unstable"), "{}", stderr(&out));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["sweep", "--param", "gas_pressure=log:1e-6mbar:1e-2mbar:5", "--param", "phi=0,45deg"];
    let (a, b) = (cscool(&args), cscool(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let (a, b) = (cscool(&["psd"]), cscool(&["psd"]));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn manifest_lists_every_csv_once() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = cscool(&["psd", "--out", d]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    let mut listed: Vec<String> = manifest["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["path"].as_str().unwrap().to_string())
        .collect();
    let mut on_disk: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    listed.sort();
    on_disk.sort();
    assert_eq!(listed, on_disk);
    assert_eq!(on_disk, ["psd.csv", "psd_peaks.csv", "psd_poles.csv"]);
    assert!(manifest["derived"]["mass"].as_f64().unwrap() > 0.0);
}

#[test]
fn evolve_and_displacements_run() {
    let out = cscool(&["evolve", "--t-end", "1ms", "--n-out", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let t = column(&stdout(&out), "time");
    assert_eq!(t, vec![0.0, 5e-4, 1e-3]);
    let out = cscool(&["displacements"]);
    let sel = column(&stdout(&out), "selected");
    assert_eq!(sel.iter().filter(|&&s| s == 1.0).count(), 1);
}

#[test]
fn figure_and_gscool_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = cscool(&["figure", "fig2", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("fig2_phi.csv").exists());
    let out = cscool(&["gscool", "--axis", "x", "--out", d]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let n = column(&fs::read_to_string(dir.path().join("gscool.csv")).unwrap(), "n_x");
    assert!(n.iter().cloned().fold(f64::INFINITY, f64::min) < 1.0);
}
