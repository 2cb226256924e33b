//! End-to-end tests of the `markov-risk` binary: exit codes, file outputs,
//! and the RISK_WORKERS determinism contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use markov_risk_cli::{parse_csv, CSV_HEADER};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_markov-risk"))
}

fn run_in(dir: &Path, args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = binary();
    cmd.current_dir(dir).args(args);
    match workers {
        Some(w) => cmd.env("RISK_WORKERS", w),
        None => cmd.env_remove("RISK_WORKERS"),
    };
    cmd.output().expect("binary runs")
}

fn tml() -> tempfile::TempDir {
    tempfile::tempdir().expect("temp dir")
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = tml();
    let out = run_in(dir.path(), &["run"], None);
    assert_eq!(out.status.code(), Some(2));

    let out = run_in(dir.path(), &["run", "--preset", "nope"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn invalid_config_field_reports_exit_2() {
    let dir = tml();
    let config = dir.path().join("bad.json");
    std::fs::write(
        &config,
        r#"{"name": "bad", "k": 6, "n": 100, "delta": 0.5,
           "divergences": ["kl"], "estimators": ["add(0.5)"], "master_seed": 1}"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["run", config.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta"));
}

#[test]
fn theory_prints_the_bound_value() {
    let dir = tml();
    let out = run_in(
        dir.path(),
        &[
            "theory", "--risk", "estimation_f", "--side", "upper", "--k", "6", "--n", "100000",
            "--delta", "0.05", "--divergence", "kl",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((value - 5e-4).abs() < 1e-12);

    // The adjusted prediction constant divides by 4.
    let plain = run_in(
        dir.path(),
        &["theory", "--risk", "prediction_kl", "--side", "upper", "--k", "6", "--n", "100000"],
        None,
    );
    let adjusted = run_in(
        dir.path(),
        &[
            "theory", "--risk", "prediction_kl", "--side", "upper", "--k", "6", "--n", "100000",
            "--adjusted",
        ],
        None,
    );
    let plain: f64 = String::from_utf8_lossy(&plain.stdout).trim().parse().unwrap();
    let adjusted: f64 = String::from_utf8_lossy(&adjusted.stdout).trim().parse().unwrap();
    assert!((plain / adjusted - 4.0).abs() < 1e-12);

    let out = run_in(
        dir.path(),
        &["theory", "--risk", "bogus", "--side", "upper", "--k", "6", "--n", "1000"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_writes_csv_and_plot_deterministically_across_worker_counts() {
    let dir = tml();
    let config = dir.path().join("exp.json");
    std::fs::write(
        &config,
        r#"{"name": "tiny", "k": 3, "n": [200, 400], "delta": 0.05,
           "divergences": ["kl", "l2"], "estimators": ["add(0.5)", "add-sqrt"],
           "trials": 8, "master_seed": 11}"#,
    )
    .unwrap();

    let run_once = |workers: &str, out_name: &str| -> (Vec<u8>, PathBuf) {
        let out_path = dir.path().join(out_name);
        let svg_path = dir.path().join(format!("{out_name}.svg"));
        let out = run_in(
            dir.path(),
            &[
                "run",
                config.to_str().unwrap(),
                "--out",
                out_path.to_str().unwrap(),
                "--plot",
                svg_path.to_str().unwrap(),
            ],
            Some(workers),
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        (std::fs::read(&out_path).unwrap(), svg_path)
    };

    let (serial, svg_path) = run_once("1", "serial.csv");
    let (parallel, _) = run_once("3", "parallel.csv");
    assert_eq!(serial, parallel, "CSV bytes must not depend on RISK_WORKERS");

    let text = String::from_utf8(serial).unwrap();
    assert!(text.starts_with(CSV_HEADER));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 2);
    // Sorted by (k, n, estimator, divergence).
    assert!(rows.windows(2).all(|w| {
        (w[0].k, w[0].n, &w[0].estimator, &w[0].divergence)
            <= (w[1].k, w[1].n, &w[1].estimator, &w[1].divergence)
    }));

    let svg = std::fs::read_to_string(svg_path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("</svg>"));
}

#[test]
fn flag_overrides_change_the_run() {
    let dir = tml();
    let out = run_in(
        dir.path(),
        &[
            "run", "--preset", "fig1a", "--n", "300", "--trials", "2", "--k", "4",
            "--out", "small.csv",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = parse_csv(&std::fs::read_to_string(dir.path().join("small.csv")).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.k == 4 && r.n == 300 && r.trials == 2));
}

#[test]
fn bad_worker_env_is_a_usage_error() {
    let dir = tml();
    let out = run_in(dir.path(), &["selftest"], Some("zero?"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn priors_subcommands_emit_csv() {
    let dir = tml();
    let out = run_in(dir.path(), &["priors", "prediction", "--k", "4", "--n", "1000"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("kind,k,n,levels,partial_bayes_risk,theory_lower"));

    let out = run_in(
        dir.path(),
        &[
            "priors", "estimation", "--k", "4", "--n", "5000", "--delta", "0.05",
            "--pi-star", "0.2", "--trials", "10",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("estimation,4,5000"));

    // Infeasible prior geometry is a configuration error.
    let out = run_in(
        dir.path(),
        &["priors", "estimation", "--k", "6", "--n", "10", "--delta", "0.05", "--pi-star", "0.1"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes_and_prints_verdicts() {
    let dir = tml();
    let out = run_in(dir.path(), &["selftest"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("PASS").count(), 5);
    assert!(!text.contains("FAIL"));
}
