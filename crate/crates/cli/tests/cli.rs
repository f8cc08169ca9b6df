use assert_cmd::Command;
use predicates::prelude::*;
use predicates::str::contains;

const NEAR_EQUAL: &str = "10.00,9.99,9.98,9.97,9.96,9.95,9.94,9.93,9.92,9.91,9.90,9.89";

fn hypoexp() -> Command {
    let mut cmd = Command::cargo_bin("hypoexp").unwrap();
    cmd.env_remove("HYPOEXP_SEED").env_remove("HYPOEXP_OUTPUT_DIR");
    cmd
}

fn stdout_of(args: &[&str]) -> String {
    let out = hypoexp().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn exact_two_rates() {
    hypoexp()
        .args(["exact", "--rates", "1,2", "--t", "1"])
        .assert()
        .success()
        .stdout(contains("closed form: 3.99576e-1 verdict stable"))
        .stdout(contains("exact cdf: 3.99576e-1"));
}

#[test]
fn exact_near_equal_rates_is_reported_not_refused() {
    hypoexp()
        .args(["exact", "--rates", NEAR_EQUAL])
        .assert()
        .code(0)
        .stdout(contains("verdict catastrophic"))
        .stdout(contains("via expm"));
}

#[test]
fn exact_floor_regime_recommends_estimate() {
    hypoexp()
        .args(["exact", "--rates", "0.03x10"])
        .assert()
        .success()
        .stdout(contains("closed form: unavailable"))
        .stdout(contains("warning: result is below 1e-12"))
        .stdout(contains("hypoexp estimate"));
}

#[test]
fn exact_json_is_parseable() {
    let text = stdout_of(&["exact", "--rates", "1,2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["exact_cdf"]["value"].as_f64().unwrap() - (1.0 - 2.0 * (-1.0f64).exp() + (-2.0f64).exp())).abs() < 1e-12);
    assert_eq!(v["ross"]["report"]["verdict"], "stable");
}

#[test]
fn estimate_with_several_runs_reports_relative_error() {
    let text = stdout_of(&["estimate", "--rates", "0.03x10", "--N", "1000", "--K", "4"]);
    assert!(text.contains("estimate (mean of 4 runs): "));
    assert!(text.contains("log10 estimate: -21.7"));
    assert!(text.contains("re_hat: "));
    assert!(text.contains("relative-error bound: 9.27e-2"));
}

#[test]
fn estimate_single_run_omits_relative_error() {
    let text = stdout_of(&["estimate", "--rates", "0.03x10", "--K", "1"]);
    assert!(text.contains("estimate: "));
    assert!(!text.contains("re_hat"));
    assert!(!text.contains("mean of"));
}

#[test]
fn estimate_is_deterministic_and_seed_comes_from_env() {
    let args = ["estimate", "--rates", "0.01x10", "--N", "500", "--K", "3"];
    let a = stdout_of(&[&args[..], &["--seed", "7"]].concat());
    let b = String::from_utf8(
        hypoexp().args(args).env("HYPOEXP_SEED", "7").assert().success().get_output().stdout.clone(),
    )
    .unwrap();
    assert_eq!(a, b);
    assert_ne!(a, stdout_of(&[&args[..], &["--seed", "8"]].concat()));
}

#[test]
fn bound_matches_closed_form() {
    hypoexp()
        .args(["bound", "--rates", "0.03x10", "--N", "1000"])
        .assert()
        .success()
        .stdout(contains("second-moment ratio bound: 8.59596e0"))
        .stdout(contains("relative-error bound (N=1000): 9.27144e-2"));
}

#[test]
fn oracle_routes() {
    hypoexp()
        .args(["oracle", "--rates", "0.03x10"])
        .assert()
        .success()
        .stdout("oracle: 1.58346e-22 (poisson-tail)\n");
    hypoexp()
        .args(["oracle", "--rates", "1,2"])
        .assert()
        .success()
        .stdout("oracle: 3.99576e-1 (extended-precision-ross)\n");
}

fn bench_csv(seed: &str) -> String {
    stdout_of(&["bench", "--N", "300", "--K", "3", "--seed", seed])
}

fn estimate_columns(csv_text: &str) -> Vec<String> {
    csv_text
        .lines()
        .skip(1)
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            format!("{},{},{}", cols[0], cols[1], cols[6])
        })
        .collect()
}

#[test]
fn bench_csv_has_fifteen_rows_and_is_reproducible() {
    let first = bench_csv("1");
    let mut lines = first.lines();
    assert_eq!(lines.next().unwrap(), "model,algorithm,n,t,N,K,estimate,re_hat,rtv,cpu_seconds,flags");
    assert_eq!(lines.count(), 15);
    assert_eq!(estimate_columns(&first), estimate_columns(&bench_csv("1")));
}

#[test]
fn bench_json_matches_csv() {
    let csv_text = bench_csv("1");
    let json_text = stdout_of(&["bench", "--N", "300", "--K", "3", "--seed", "1", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json_text).unwrap();
    assert_eq!(rows.len(), 15);
    for (row, line) in rows.iter().zip(csv_text.lines().skip(1)) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(row["model"], cols[0]);
        assert_eq!(row["algorithm"], cols[1]);
        let est = row["estimate"].as_f64().unwrap_or(f64::NAN);
        let csv_est: f64 = cols[6].parse().unwrap();
        assert!(
            (est.is_nan() && csv_est.is_nan()) || (est - csv_est).abs() <= 1e-5 * csv_est.abs(),
            "{est} vs {csv_est}"
        );
    }
}

#[test]
fn dump_rates_round_trips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("rates.txt");
    let rates = "0.1,0.30000000000000004,1e-7,9.89,0.011";
    let direct = stdout_of(&["exact", "--rates", rates, "--dump-rates", dump.to_str().unwrap()]);
    let via_file = stdout_of(&["exact", "--rates-file", dump.to_str().unwrap()]);
    assert_eq!(direct, via_file);
    let text = std::fs::read_to_string(&dump).unwrap();
    let back: Vec<u64> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.parse::<f64>().unwrap().to_bits())
        .collect();
    let expected: Vec<u64> = rates.split(',').map(|r| r.parse::<f64>().unwrap().to_bits()).collect();
    assert_eq!(back, expected);
}

#[test]
fn output_dir_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    hypoexp()
        .args(["exact", "--rates", "1,2", "--output", "report.txt"])
        .env("HYPOEXP_OUTPUT_DIR", dir.path())
        .assert()
        .success()
        .stdout(predicate::str::is_empty());
    let text = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(text.contains("3.99576e-1"));
}

#[test]
fn malformed_input_exits_two() {
    for args in [
        vec!["exact", "--rates", "1,-2"],
        vec!["exact", "--rates", "1,abc"],
        vec!["exact", "--rates", "1,2", "--t", "0"],
        vec!["exact", "--rates", "1,2", "--rates-file", "x.txt"],
        vec!["exact"],
        vec!["estimate", "--rates", "1,2", "--N", "0"],
        vec!["estimate", "--rates", "1,2", "--K", "0"],
    ] {
        hypoexp().args(&args).assert().code(2);
    }
}

#[test]
fn io_failures_exit_three() {
    hypoexp()
        .args(["exact", "--rates", "1,2", "--output", "/nonexistent-dir/out.txt"])
        .assert()
        .code(3);
    hypoexp()
        .args(["exact", "--rates-file", "/nonexistent-dir/rates.txt"])
        .assert()
        .code(3);
}
