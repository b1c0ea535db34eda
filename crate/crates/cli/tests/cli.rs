use std::process::{Command, Output};

use horizon_entropy_cli::{execute, Experiment, ExperimentConfig, Overrides};

fn horizon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horizon"))
        .args(args)
        .output()
        .expect("spawn horizon")
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let out = horizon(&[
            "--experiment",
            "truncation",
            "--seed",
            "7",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.csv");
    horizon(&[
        "--experiment",
        "truncation",
        "--seed",
        "8",
        "--out",
        c.to_str().unwrap(),
    ]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn symmetry_passes_with_default_trials() {
    let out = horizon(&["--experiment", "symmetry"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 201);
    assert!(text.starts_with("trial,dim_left,dim_right,s_left,s_right,abs_diff\n"));
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "trials = 5\nnot_a_key = 1\n").unwrap();
    let out = horizon(&[
        "--experiment",
        "symmetry",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_a_key"));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let out = horizon(&[
        "--experiment",
        "symmetry",
        "--config",
        "/nonexistent/run.cfg",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let out = horizon(&[
        "--experiment",
        "symmetry",
        "--out",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn precondition_violation_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "mass = 0\n").unwrap();
    let out = horizon(&[
        "--experiment",
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out_path = dir.path().join("r.json");
    std::fs::write(&cfg, "seed = 1\nformat = csv\ntrials = 4\n").unwrap();
    let out = horizon(&[
        "--experiment",
        "growth",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "99",
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(json["seed"], 99);
    assert_eq!(json["config"]["trials"], "4");
    assert_eq!(json["rows"].as_array().unwrap().len(), 4);
    assert_eq!(json["passed"], true);
}

#[test]
fn kruskal_rejects_the_horizon_but_passes() {
    let out = horizon(&["--experiment", "kruskal"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let kind = headers.iter().position(|h| h == "kind").unwrap();
    let status = headers.iter().position(|h| h == "status").unwrap();
    let boundary: Vec<_> = reader
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[kind] == "boundary-probe")
        .collect();
    assert_eq!(boundary.len(), 3);
    assert!(boundary.iter().all(|r| r[status].starts_with("rejected")));
}

#[test]
fn csv_reals_round_trip() {
    let out = horizon(&["--experiment", "oracle"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let row = reader.records().next().unwrap().unwrap();
    let exact: f64 = row[2].parse().unwrap();
    assert_eq!(exact, 1.0 + std::f64::consts::FRAC_1_SQRT_2);
}

#[test]
fn library_entry_point_matches_binary() {
    let config =
        ExperimentConfig::resolve(Experiment::Growth, "trials = 10\n", &Overrides::default())
            .unwrap();
    let report = execute(&config).unwrap();
    assert!(report.passed());
    assert_eq!(report.table.rows.len(), 10);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "trials = 10\n").unwrap();
    let out = horizon(&["--experiment", "growth", "--config", cfg.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), report.to_csv());
}
