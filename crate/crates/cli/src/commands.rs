use std::fmt::Write as _;

use hypoexp_core::harness::{
    build_table_rows, write_rows, OutputFormat, SamplePolicy, MODEL3_ORACLE_DIGITS,
};
use hypoexp_core::{
    builtin_models, exact_cdf, expm_survival, highprecision_confluent_cdf, highprecision_hypoexp_cdf,
    is_estimate, re_bound, ross_cdf, run_trials, second_moment_ratio_bound, Error, Estimator,
    HypoexpProblem, IsConfig, ModelSpec, Verdict,
};
use serde_json::json;

use crate::{CliError, Format};

/// Text for stdout plus lines for stderr (timing, which varies run to run).
pub struct Report {
    pub stdout: String,
    pub stderr: String,
}

fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

fn json_text(value: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("serializable");
    text.push('\n');
    text
}

pub fn cmd_exact(problem: &HypoexpProblem, format: Format) -> Result<Report, CliError> {
    let ross = ross_cdf(problem);
    let survival = expm_survival(problem)?;
    let exact = exact_cdf(problem)?;

    let mut warnings = Vec::new();
    if let Ok((_, report)) = &ross {
        if report.verdict == Verdict::Catastrophic {
            warnings.push("closed form is catastrophically unstable; its value is meaningless".to_string());
        } else if report.verdict == Verdict::Suspect {
            warnings.push(format!(
                "closed form lost {:.1} digits to cancellation",
                report.cancellation_digits
            ));
        }
    }
    if survival.raw > 1.0 || survival.raw < 0.0 {
        warnings.push("matrix-exponential survival left [0, 1]; clamped companion reported".to_string());
    }
    if exact.floor_regime {
        warnings.push(
            "result is below 1e-12, the double-precision floor; use `hypoexp estimate`".to_string(),
        );
    }

    let stdout = match format {
        Format::Json => json_text(json!({
            "n": problem.n(),
            "t": problem.threshold(),
            "ross": match &ross {
                Ok((value, report)) => json!({ "value": value, "report": report }),
                Err(e) => json!({ "error": e.to_string() }),
            },
            "expm": { "survival": survival.raw, "survival_clamped": survival.clamped, "cdf": survival.cdf() },
            "exact_cdf": { "value": exact.value, "route": exact.route, "floor_regime": exact.floor_regime },
            "warnings": warnings,
        })),
        _ => {
            let mut out = String::new();
            writeln!(out, "problem: n={} t={}", problem.n(), problem.threshold()).unwrap();
            match &ross {
                Ok((value, report)) => writeln!(
                    out,
                    "closed form: {} verdict {} (cancellation {:.1} digits, min rate gap {})",
                    sci(*value),
                    report.verdict,
                    report.cancellation_digits,
                    sci(report.min_rate_gap)
                )
                .unwrap(),
                Err(e) => writeln!(out, "closed form: unavailable ({e})").unwrap(),
            }
            writeln!(
                out,
                "matrix exponential: survival {} (clamped {}), cdf {}",
                sci(survival.raw),
                sci(survival.clamped),
                sci(survival.cdf())
            )
            .unwrap();
            writeln!(out, "exact cdf: {} via {}", sci(exact.value), exact.route).unwrap();
            for w in &warnings {
                writeln!(out, "warning: {w}").unwrap();
            }
            out
        }
    };
    Ok(Report { stdout, stderr: String::new() })
}

pub fn cmd_estimate(
    problem: &HypoexpProblem,
    sample_size: u64,
    runs: usize,
    seed: u64,
    format: Format,
) -> Result<Report, CliError> {
    if runs == 0 {
        return Err(CliError::Input("K must be at least 1".into()));
    }
    let bound = re_bound(problem.unit_rates(), sample_size)?;
    if runs == 1 {
        let r = is_estimate(problem, &IsConfig::new(sample_size, seed)?)?;
        let stdout = match format {
            Format::Json => json_text(json!({
                "n": problem.n(), "t": problem.threshold(), "N": sample_size, "K": 1, "seed": seed,
                "estimate": r.estimate, "log10_estimate": r.log10_estimate(), "accepted": r.accepted,
                "re_bound": bound, "cpu_seconds": r.elapsed_seconds,
            })),
            _ => format!(
                "problem: n={} t={} N={} K=1 seed={}\nestimate: {}\nlog10 estimate: {:.4}\naccepted: {}/{}\nrelative-error bound: {:.2e}\n",
                problem.n(),
                problem.threshold(),
                sample_size,
                seed,
                sci(r.estimate),
                r.log10_estimate(),
                r.accepted,
                sample_size,
                bound
            ),
        };
        let stderr = format!("cpu seconds: {:.6}\n", r.elapsed_seconds);
        return Ok(Report { stdout, stderr });
    }

    let s = run_trials(problem, Estimator::ImportanceSampling, sample_size, runs, seed)?;
    let log10 = s.mean.log10();
    let stdout = match format {
        Format::Json => json_text(json!({
            "n": problem.n(), "t": problem.threshold(), "N": sample_size, "K": runs, "seed": seed,
            "estimate": s.mean, "log10_estimate": log10, "per_run_estimates": s.per_run_estimates,
            "sample_std": s.sample_std, "re_hat": s.re_hat, "rtv": s.rtv,
            "cpu_seconds": s.total_cpu_seconds, "re_bound": bound,
        })),
        _ => {
            let mut out = String::new();
            writeln!(
                out,
                "problem: n={} t={} N={} K={} seed={}",
                problem.n(),
                problem.threshold(),
                sample_size,
                runs,
                seed
            )
            .unwrap();
            writeln!(out, "estimate (mean of {runs} runs): {}", sci(s.mean)).unwrap();
            writeln!(out, "log10 estimate: {log10:.4}").unwrap();
            match s.re_hat {
                Some(re) => writeln!(out, "re_hat: {re:.2e}").unwrap(),
                None => writeln!(out, "re_hat: undefined (every run returned 0)").unwrap(),
            }
            writeln!(out, "relative-error bound: {bound:.2e}").unwrap();
            out
        }
    };
    let mut stderr = format!("cpu seconds: {:.6}\n", s.total_cpu_seconds);
    match s.rtv {
        Some(rtv) => writeln!(stderr, "rtv: {rtv:.2e}").unwrap(),
        None => writeln!(stderr, "rtv: undefined").unwrap(),
    }
    Ok(Report { stdout, stderr })
}

pub fn cmd_bound(problem: &HypoexpProblem, sample_size: u64, format: Format) -> Result<Report, CliError> {
    let ratio = second_moment_ratio_bound(problem.unit_rates());
    let re = re_bound(problem.unit_rates(), sample_size)?;
    let stdout = match format {
        Format::Json => json_text(json!({
            "n": problem.n(), "t": problem.threshold(), "N": sample_size,
            "second_moment_ratio_bound": ratio, "re_bound": re,
        })),
        _ => format!(
            "problem: n={} t={}\nsecond-moment ratio bound: {}\nrelative-error bound (N={}): {}\n",
            problem.n(),
            problem.threshold(),
            sci(ratio),
            sample_size,
            sci(re)
        ),
    };
    Ok(Report { stdout, stderr: String::new() })
}

pub fn cmd_oracle(problem: &HypoexpProblem, digits: u32, format: Format) -> Result<Report, CliError> {
    let (value, provenance) = if problem.rates().is_iid() {
        let spec = ModelSpec::new("input", problem.clone())?;
        (spec.oracle_value, spec.provenance.tag())
    } else if problem.rates().first_duplicate().is_some() {
        (
            highprecision_confluent_cdf(problem, digits.max(MODEL3_ORACLE_DIGITS))?,
            "extended-precision-ross",
        )
    } else {
        (highprecision_hypoexp_cdf(problem, digits)?, "extended-precision-ross")
    };
    let stdout = match format {
        Format::Json => json_text(json!({
            "n": problem.n(), "t": problem.threshold(), "oracle": value, "provenance": provenance,
        })),
        _ => format!("oracle: {} ({provenance})\n", sci(value)),
    };
    Ok(Report { stdout, stderr: String::new() })
}

pub fn cmd_bench(
    sample_size: Option<u64>,
    runs: usize,
    seed: u64,
    format: Format,
) -> Result<Report, CliError> {
    let policy = sample_size.map_or(SamplePolicy::default(), SamplePolicy::Fixed);
    let rows = build_table_rows(&builtin_models(), policy, runs, seed)?;
    let format = match format {
        Format::Json => OutputFormat::Json,
        _ => OutputFormat::Csv,
    };
    let mut buf = Vec::new();
    write_rows(&rows, format, &mut buf)?;
    let stdout = String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Report { stdout, stderr: String::new() })
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Io(msg) => CliError::Io(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}
