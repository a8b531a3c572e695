//! End-to-end tests of the `localtime` binary.

use std::fs;
use std::process::{Command, Output};

fn localtime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localtime"))
        .args(args)
        .env_remove("LOCALTIME_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(code(&localtime(&["bogus"])), 1);
    assert_eq!(code(&localtime(&[])), 1);
    assert_eq!(code(&localtime(&["experiment", "E9"])), 1);
    assert_eq!(code(&localtime(&["--help"])), 0);
    assert_eq!(code(&localtime(&["--version"])), 0);
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        &["experiment", "E3", "--radius", "1"][..],
        &["experiment", "E5", "--s", "0"],
        &["experiment", "E1", "--replicas", "0"],
        &["experiment", "E2", "--s", "0.9", "--t", "0.5"],
        &["experiment", "E1", "--cap", "10"],
        &["simulate", "--n", "0"],
        &["oracle", "--n", "40"],
    ] {
        let out = localtime(args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("error"),
            "{args:?}"
        );
    }
}

#[test]
fn oracle_matches_brute_force_enumeration() {
    let out = localtime(&["oracle", "--n", "8"]);
    assert_eq!(code(&out), 0);
    let mut counts = [0u64; 9];
    for code in 0u64..(1 << 16) {
        let (mut x, mut y, mut k) = (0i32, 0i32, 0usize);
        for step in 0..8 {
            match (code >> (2 * step)) & 3 {
                0 => x += 1,
                1 => x -= 1,
                2 => y += 1,
                _ => y -= 1,
            }
            k += usize::from(x == 0 && y == 0);
        }
        counts[k] += 1;
    }
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,count,total,probability"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let k: usize = fields[0].parse().unwrap();
        assert_eq!(fields[1].parse::<u64>().unwrap(), counts[k], "k={k}");
        assert_eq!(fields[2], "65536");
    }
}

#[test]
fn identical_seeds_give_identical_summaries() {
    let args = [
        "experiment",
        "E1",
        "--n",
        "1000",
        "--replicas",
        "100",
        "--seed",
        "7",
    ];
    let a = localtime(&args);
    let b = localtime(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = localtime(&[
        "experiment",
        "E1",
        "--n",
        "1000",
        "--replicas",
        "100",
        "--seed",
        "8",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn thread_count_does_not_change_results() {
    let base = [
        "experiment",
        "E2",
        "--n",
        "1000,100000",
        "--replicas",
        "300",
        "--seed",
        "3",
    ];
    let one = localtime(&[&base[..], &["--threads", "1"]].concat());
    let four = localtime(&[&base[..], &["--threads", "4"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_localtime"))
        .args(base)
        .env("LOCALTIME_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn check_mode_exits_two_on_failed_gate() {
    // any return before √n puts L_n(1/2) above a tiny η, so the tightness gate fails
    let args = [
        "experiment",
        "E6",
        "--n",
        "10000",
        "--delta",
        "0.5",
        "--eta",
        "0.0001",
        "--replicas",
        "200",
        "--staircase",
        "10",
        "--pairings",
        "5",
    ];
    assert_eq!(code(&localtime(&args)), 0);
    assert_eq!(code(&localtime(&[&args[..], &["--check"]].concat())), 2);
}

#[test]
fn output_directory_holds_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = localtime(&[
        "experiment",
        "E3",
        "--radius",
        "4,8",
        "--cap",
        "10000",
        "--replicas",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&status), 0);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["experiment"], "E3");
    assert_eq!(summary["config"]["radius"], serde_json::json!([4, 8]));
    assert_eq!(summary["config"]["replicas"], 50);
    assert!(summary.get("wall_clock_seconds").is_none());
    let samples = fs::read_to_string(out.join("samples.csv")).unwrap();
    assert!(samples.starts_with("replica,statistic,value\n"));
    assert!(fs::read_to_string(out.join("plot.py"))
        .unwrap()
        .contains("matplotlib"));
    let timing: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("timing.json")).unwrap()).unwrap();
    assert!(timing["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn config_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = localtime(&[
        "experiment",
        "E5",
        "--n",
        "10000",
        "--replicas",
        "80",
        "--seed",
        "5",
    ]);
    let summary: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let path = dir.path().join("config.json");
    fs::write(&path, summary["config"].to_string()).unwrap();
    let second = localtime(&["experiment", "E5", "--config", path.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
    let wrong = localtime(&["experiment", "E1", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&wrong), 1);
}

#[test]
fn simulate_path_agrees_with_return_times() {
    let returns = stdout(&localtime(&[
        "simulate",
        "--n",
        "5000",
        "--seed",
        "4",
        "--returns",
    ]));
    let count = returns.lines().skip(1).count() as f64;
    let path = stdout(&localtime(&[
        "simulate",
        "--n",
        "5000",
        "--seed",
        "4",
        "--resolution",
        "50",
    ]));
    let values: Vec<f64> = path
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 51);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert!((values[50] - count / 5000f64.ln()).abs() < 1e-12);
}

#[test]
fn metric_reports_shifted_step_distance() {
    let out = localtime(&["metric", "--f", "step:0.4", "--g", "step:0.5"]);
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((reports[0]["value"].as_f64().unwrap() - 0.1).abs() <= 1e-3);
    assert_eq!(reports[0]["kind"], "m1-approx");
    assert_eq!(reports[2]["value"].as_f64().unwrap(), 1.0);
}

#[test]
fn metric_reads_csv_paths() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    let g = dir.path().join("g.csv");
    fs::write(&f, "t,value\n0,0\n1,1\n").unwrap();
    fs::write(&g, "t,value\n0,0\n1,0.5\n").unwrap();
    let out = localtime(&[
        "metric",
        "--f",
        f.to_str().unwrap(),
        "--g",
        g.to_str().unwrap(),
    ]);
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((reports[0]["value"].as_f64().unwrap() - 0.5).abs() <= 1e-3);
    assert!((reports[2]["value"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    let bad = localtime(&["metric", "--f", "step:x", "--g", "step:0.5"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn sample_limit_outputs() {
    let grid = stdout(&localtime(&[
        "sample-limit",
        "--grid",
        "0.25,0.5,1",
        "--seed",
        "2",
    ]));
    let values: Vec<f64> = grid
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    let jumps = stdout(&localtime(&[
        "sample-limit",
        "--epsilon",
        "0.01",
        "--seed",
        "2",
    ]));
    assert!(jumps.starts_with("t\n"));
    for t in jumps.lines().skip(1) {
        let t: f64 = t.parse().unwrap();
        assert!((0.01..=1.0).contains(&t));
    }
    assert_eq!(code(&localtime(&["sample-limit"])), 1);
}
