use plrg::config::{Experiment, ExperimentConfig};
use plrg::formats::CovarianceRow;
use plrg::plot::PlotKind;
use plrg::run;
use std::fs;
use std::path::Path;
use std::process::Command;

fn plrg(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_plrg"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("PLRG_SEED")
        .output()
        .unwrap()
}

#[test]
fn regimes_table_has_one_row_per_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let o = plrg(&["regimes", "--gamma", "1.5,2,3"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(dir.path().join("regimes.csv")).unwrap();
    assert_eq!(
        r.headers().unwrap(),
        vec!["experiment", "event", "alpha", "gamma", "n", "reps", "estimate", "se", "asymptote", "ratio"]
    );
    let events: Vec<String> = r.records().map(|rec| rec.unwrap()[1].to_string()).collect();
    assert_eq!(events, ["sub_critical", "super_critical", "super_critical"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["motifs", "--n", "1000", "--reps", "5000", "--seed", "3"];
    assert!(plrg(&args, a.path()).status.success());
    let threaded = [&args[..], &["--threads", "3"]].concat();
    assert!(plrg(&threaded, b.path()).status.success());
    let read = |d: &Path| fs::read(d.join("motifs.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn manifest_records_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_plrg"))
        .args(["edges_vertices", "--n", "256,512", "--reps", "10", "--out"])
        .arg(dir.path())
        .env("PLRG_SEED", "77")
        .output()
        .unwrap();
    assert!(o.status.success());
    let m: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("edges_vertices_manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 77);
    assert_eq!(m["config"]["seed"], 77);
    assert_eq!(m["sub_seeds"].as_array().unwrap().len(), 2);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert!(m["wall_time_secs"].as_f64().unwrap() >= 0.0);
}

#[test]
fn height_run_writes_covariance_rows_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::defaults(Experiment::Height);
    c.n_list = vec![5000];
    c.reps = 100;
    c.output_dir = dir.path().to_path_buf();
    let out = run(&c, Some(1), &[PlotKind::CovMatrix, PlotKind::BoundaryCurve]).unwrap();
    let table = out
        .files
        .iter()
        .find(|p| p.file_name().unwrap().to_string_lossy().starts_with("height_fluctuation"))
        .unwrap();
    let rows: Vec<CovarianceRow> = csv::Reader::from_path(table).unwrap().deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.n == 5000 && r.reps == 100 && r.target_cov > 0.0));
    let plots = fs::read_dir(dir.path().join("plots")).unwrap().count();
    assert_eq!(plots, 2);
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::defaults(Experiment::Regimes);
    c.output_dir = dir.path().join("o");
    let path = dir.path().join("c.json");
    fs::write(&path, serde_json::to_string(&c).unwrap()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_plrg"))
        .args(["run", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("o/regimes.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| plrg(args, dir.path()).status.code();
    assert_eq!(code(&["regimes", "--reps", "0"]), Some(1));
    assert_eq!(code(&["height", "--grid", "0.5,1.5"]), Some(1));
    assert_eq!(code(&["regimes", "--plot", "scatter"]), Some(1));
    // no sub-critical regime at gamma = 3
    assert_eq!(code(&["height", "--gamma", "3", "--n", "1000", "--reps", "10"]), Some(2));
    assert_eq!(
        code(&["graphon", "--gamma", "1.5", "--n", "200", "--reps", "2", "--resolution", "10", "--check"]),
        Some(3)
    );
    assert_eq!(code(&["regimes", "--check"]), Some(0));
}
