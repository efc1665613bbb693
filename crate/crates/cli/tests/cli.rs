//! Binary-level tests: flag handling, config errors, exit codes, artifact
//! layout, and output invariants that only show up end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_failsim"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("failsim-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, mutate: impl Fn(&str) -> String) -> PathBuf {
    let base = include_str!("../../../configs/servo_valve.cfg");
    let path = dir.join(name);
    std::fs::write(&path, mutate(base)).unwrap();
    path
}

#[test]
fn misspelled_config_key_exits_1_and_names_the_key() {
    let dir = temp_dir("badkey");
    let cfg = write_config(&dir, "bad.cfg", |s| s.replace("lambda0", "lamda0"));
    let out = bin()
        .args(["selftest", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.contains("lamda0"), "stderr should name the key: {err}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn empty_config_exits_1_with_parse_error() {
    let dir = temp_dir("empty");
    let cfg = dir.join("empty.cfg");
    std::fs::write(&cfg, "").unwrap();
    let out = bin()
        .args(["selftest", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("malformed"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn missing_config_file_exits_1() {
    let out = bin()
        .args(["selftest", "--config", "/nonexistent/nowhere.cfg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_config_value_exits_1_with_field_path() {
    let dir = temp_dir("badval");
    let cfg = write_config(&dir, "bad.cfg", |s| s.replace("beta = 1.2", "beta = 0.0"));
    let out = bin()
        .args(["selftest", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.contains("beta"), "{err}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn selftest_passes_on_the_built_in_config() {
    let out = bin().arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ok pmf-normalization"));
    assert!(stdout.contains("ok closed-form-oracle"));
}

#[test]
fn unknown_model_value_exits_1() {
    let out = bin()
        .args(["reliability", "--model", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reliability_writes_curves_and_manifest() {
    let dir = temp_dir("rel");
    let out = bin()
        .args([
            "reliability",
            "--model",
            "1",
            "--replications",
            "300",
            "--seed",
            "9",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let csv = std::fs::read_to_string(dir.join("reliability_model_1.csv")).unwrap();
    let curve = failsim_core::Curve::from_csv(&csv).unwrap();
    assert_eq!(curve.seed, 9, "--seed must override the config seed");
    assert_eq!(curve.replications, 300);
    for p in &curve.points {
        assert!(p.t.is_finite() && p.reliability.is_finite() && p.std_error.is_finite());
        assert!((0.0..=1.0).contains(&p.reliability));
    }
    let manifest = std::fs::read_to_string(dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed=9\n"));
    assert!(manifest.contains("replications=300\n"));
    assert!(manifest.contains("config_sha256="));
    assert!(!dir.join("reliability_model_2.csv").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn same_config_and_seed_reproduce_byte_identical_csvs() {
    let dir_a = temp_dir("repro-a");
    let dir_b = temp_dir("repro-b");
    for dir in [&dir_a, &dir_b] {
        let out = bin()
            .args([
                "reliability",
                "--model",
                "both",
                "--replications",
                "250",
                "--out",
            ])
            .arg(dir)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    }
    for name in ["reliability_model_1.csv", "reliability_model_2.csv"] {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    let _ = std::fs::remove_dir_all(&dir_a);
    let _ = std::fs::remove_dir_all(&dir_b);
}

#[test]
fn standard_errors_shrink_as_one_over_sqrt_n() {
    let dir_small = temp_dir("se-small");
    let dir_big = temp_dir("se-big");
    for (dir, n) in [(&dir_small, "400"), (&dir_big, "1600")] {
        let out = bin()
            .args(["reliability", "--model", "2", "--replications", n, "--out"])
            .arg(dir)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    }
    let small = failsim_core::Curve::from_csv(
        &std::fs::read_to_string(dir_small.join("reliability_model_2.csv")).unwrap(),
    )
    .unwrap();
    let big = failsim_core::Curve::from_csv(
        &std::fs::read_to_string(dir_big.join("reliability_model_2.csv")).unwrap(),
    )
    .unwrap();
    // Compare at the time with the widest small-run error bar; quadrupling
    // N should halve it (ratio 2 within a 20% tolerance band).
    let (idx, se_small) = small
        .points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.std_error.partial_cmp(&b.1.std_error).unwrap())
        .map(|(i, p)| (i, p.std_error))
        .unwrap();
    let se_big = big.points[idx].std_error;
    assert!(se_small > 0.0 && se_big > 0.0);
    let ratio = se_small / se_big;
    assert!(
        (1.6..=2.4).contains(&ratio),
        "SE ratio at quadrupled N was {ratio}, expected about 2"
    );
    let _ = std::fs::remove_dir_all(&dir_small);
    let _ = std::fs::remove_dir_all(&dir_big);
}

#[test]
fn failsim_threads_env_matches_flag_behavior() {
    let dir_flag = temp_dir("thr-flag");
    let dir_env = temp_dir("thr-env");
    let out = bin()
        .args([
            "reliability",
            "--model",
            "1",
            "--replications",
            "200",
            "--threads",
            "2",
            "--out",
        ])
        .arg(&dir_flag)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let out = bin()
        .args([
            "reliability",
            "--model",
            "1",
            "--replications",
            "200",
            "--out",
        ])
        .arg(&dir_env)
        .env("FAILSIM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let a = std::fs::read(dir_flag.join("reliability_model_1.csv")).unwrap();
    let b = std::fs::read(dir_env.join("reliability_model_1.csv")).unwrap();
    assert_eq!(a, b, "thread count must not affect results");

    let out = bin()
        .args(["selftest"])
        .env("FAILSIM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "bad FAILSIM_THREADS must fail");
    let _ = std::fs::remove_dir_all(&dir_flag);
    let _ = std::fs::remove_dir_all(&dir_env);
}

#[test]
fn fit_round_trips_and_flags_unidentifiable_data_as_exit_2() {
    let dir = temp_dir("fit");
    let data = dir.join("increments.csv");
    let mut text = String::from("dt,dx\n");
    let vals = [0.31, 0.52, 0.41, 0.36, 0.60, 0.45, 0.39, 0.55, 0.47, 0.33];
    for v in vals {
        text.push_str(&format!("0.5,{v}\n"));
    }
    std::fs::write(&data, &text).unwrap();
    let out = bin()
        .args(["fit", "--data"])
        .arg(&data)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let fit_csv = std::fs::read_to_string(dir.join("fit.csv")).unwrap();
    assert!(fit_csv.starts_with("alpha,beta,log_likelihood,gradient_norm,iterations,n\n"));
    let manifest = std::fs::read_to_string(dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("data_sha256="));

    // A zero increment makes the likelihood unbounded: numerical failure.
    std::fs::write(&data, "dt,dx\n1,0.5\n1,0\n").unwrap();
    let out = bin()
        .args(["fit", "--data"])
        .arg(&data)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_rejects_mismatched_scenarios_header() {
    let dir = temp_dir("sweep-bad");
    let scen = dir.join("scen.csv");
    std::fs::write(&scen, "label,u_1\na,0\n").unwrap();
    let out = bin()
        .args(["sweep", "--replications", "50", "--scenarios"])
        .arg(&scen)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("u_2"), "{}", stderr_of(&out));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn failed_run_leaves_no_partial_outputs() {
    let dir = temp_dir("partial");
    // Fit errors after parsing (unbounded likelihood), so nothing at all
    // may appear in the output directory.
    let data = dir.join("zero.csv");
    std::fs::write(&data, "dt,dx\n1,0\n1,0\n").unwrap();
    let out_dir = dir.join("artifacts");
    let out = bin()
        .args(["fit", "--data"])
        .arg(&data)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(
        !out_dir.join("fit.csv").exists() && !out_dir.join("manifest.txt").exists(),
        "failed runs must not leave artifacts"
    );
    let _ = std::fs::remove_dir_all(&dir);
}
