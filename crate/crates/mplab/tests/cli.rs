//! Black-box tests of the command-line binary.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mplab"))
}

fn read_csv_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|line| line.split(',').map(|t| t.parse().unwrap()).collect())
        .collect()
}

#[test]
fn stone_run_writes_decreasing_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = bin()
        .args([
            "run",
            "--scenario",
            "stone",
            "--n-list",
            "1,10,100",
            "--grid-points",
            "801",
            "--format",
            "both",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let rows = read_csv_rows(&out.join("report.csv"));
    assert_eq!(rows.len(), 3);
    // column 3 is the diagnostic against the data-averaged candidate
    assert!(rows[0][3] > rows[1][3] && rows[1][3] > rows[2][3], "{rows:?}");

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["scenario"], "stone");
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
    assert_eq!(json["verdicts"].as_array().unwrap().len(), 4);
}

#[test]
fn unknown_scenario_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["run", "--scenario", "nosuch", "--out"])
        .arg(dir.path().join("run"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown scenario"), "{stderr}");
}

#[test]
fn invalid_n_list_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["run", "--scenario", "stone", "--n-list", "10,1", "--out"])
        .arg(dir.path().join("run"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn untilted_run_has_identical_candidate_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = bin()
        .args([
            "run",
            "--scenario",
            "translation",
            "--n-list",
            "1,10",
            "--grid-points",
            "801",
            "--format",
            "csv",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for row in read_csv_rows(&out.join("report.csv")) {
        // with no tilt the two candidate limits coincide, so columns 2 and 3
        // must agree to rounding
        assert!((row[2] - row[3]).abs() < 1e-10, "{row:?}");
    }
}

#[test]
fn list_is_stable_and_complete() {
    let a = bin().arg("list").output().unwrap();
    let b = bin().arg("list").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in ["stone", "translation", "scale", "exp-ratio"] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &Path| {
        let status = bin()
            .args([
                "run",
                "--scenario",
                "stone",
                "--n-list",
                "1,10",
                "--grid-points",
                "601",
                "--format",
                "both",
                "--out",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    };
    let out1 = dir.path().join("one");
    let out2 = dir.path().join("two");
    run(&out1);
    run(&out2);
    assert_eq!(
        fs::read(out1.join("report.csv")).unwrap(),
        fs::read(out2.join("report.csv")).unwrap()
    );
    assert_eq!(
        fs::read(out1.join("report.json")).unwrap(),
        fs::read(out2.join("report.json")).unwrap()
    );
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "scenario = stone\nn-list = 1,10\ngrid-points = 601\n").unwrap();
    let out = dir.path().join("run");
    let status = bin()
        .args(["run", "--config"])
        .arg(&conf)
        .args(["--scenario", "translation", "--format", "csv", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(text.starts_with("n,D_pt_x0,D_prob_pt,D_prob_prob,local_bayes\n"));
    assert_eq!(text.lines().count(), 3); // header + the two configured rows
}
