use std::fs;
use std::process::Command;

use rrd_core::sampler::SampleMode;
use rrd_lab::report::CSV_HEADER;
use rrd_lab::{mc_singularity, run_report, ExperimentSpec, LabError};

fn spec(dir: &std::path::Path, grid: Vec<(usize, usize)>) -> ExperimentSpec {
    ExperimentSpec {
        name: "cells".into(),
        grid,
        trials: 40,
        mode: SampleMode::ExactDp,
        steps: None,
        seed: 11,
        out: dir.to_path_buf(),
    }
}

#[test]
fn empty_grid_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sub");
    let err = run_report(&spec(&out, vec![])).unwrap_err();
    assert!(matches!(err, LabError::EmptyGrid));
    assert!(!out.exists());
}

#[test]
fn single_cell_csv() {
    let dir = tempfile::tempdir().unwrap();
    let files = run_report(&spec(dir.path(), vec![(4, 2)])).unwrap();
    let csv = fs::read_to_string(&files.csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines[1].starts_with("4,2,40,40,1,"), "{}", lines[1]);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(dir.path(), vec![(5, 2), (6, 1), (8, 3)]);
    let files = run_report(&s).unwrap();
    let (json, csv) = (fs::read(&files.json).unwrap(), fs::read(&files.csv).unwrap());
    run_report(&s).unwrap();
    assert_eq!(fs::read(&files.json).unwrap(), json);
    assert_eq!(fs::read(&files.csv).unwrap(), csv);
}

#[test]
fn cells_follow_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = spec(dir.path(), vec![(6, 1), (4, 2)]);
    let cells = mc_singularity(&s).unwrap();
    assert_eq!((cells[0].plain.hits, cells[1].plain.hits), (0, 40));
    for c in &cells {
        for e in [&c.plain, &c.signed] {
            assert!(e.ci_low <= e.p_hat && e.p_hat <= e.ci_high);
        }
    }
    s.mode = SampleMode::Enumerate;
    s.grid = vec![(4, 2)];
    let cells = mc_singularity(&s).unwrap();
    assert!(cells[0].exhaustive);
    assert_eq!((cells[0].plain.hits, cells[0].plain.trials), (90, 90));
}

fn rrdlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rrdlab")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cli_exit_codes() {
    let (code, text) = rrdlab(&["count", "--n", "4", "--d", "2"]);
    assert_eq!(code, 0);
    assert!(text.contains("90"));
    assert_eq!(rrdlab(&["coupling-audit", "--n", "4", "--d", "2"]).0, 0);
    assert_eq!(rrdlab(&["erdos", "--ones", "6"]).0, 0);
    // uniform M_{5,2} is not the derangement law
    assert_eq!(rrdlab(&["d2-cycles", "--n", "5", "--mode", "enumerate"]).0, 1);
    assert_eq!(rrdlab(&["d2-cycles", "--n", "5", "--mode", "enumerate", "--weighted"]).0, 0);
    assert_eq!(rrdlab(&["bogus"]).0, 2);
    assert_eq!(rrdlab(&["count", "--n", "4"]).0, 2);
    assert_eq!(rrdlab(&["mc-singularity", "--grid", "4"]).0, 2);
}

#[test]
fn cli_json_is_deterministic() {
    let args = ["--seed", "5", "--format", "json", "mc-singularity", "--grid", "6:2,7:3", "--trials", "30"];
    let (c1, a) = rrdlab(&args);
    let (c2, b) = rrdlab(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}
