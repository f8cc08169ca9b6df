//! Repeated-trial harness: K independent runs of an estimator, their
//! relative-error and relative-time-variance statistics, the three reference
//! models, and the comparison tables built from them.

mod models;
mod tables;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::importance::{is_estimate, EstimateResult, IsConfig};
use crate::rng::{exponential, stream_rng};
use crate::types::HypoexpProblem;

pub use models::{builtin_models, ModelSpec, OracleProvenance, MODEL3_ORACLE_DIGITS};
pub use tables::{
    build_table_rows, reproduce_tables, write_rows, Flag, OutputFormat, SamplePolicy, TableRow,
    CSV_HEADER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Estimator {
    #[serde(rename = "IS")]
    ImportanceSampling,
    #[serde(rename = "crude-MC")]
    CrudeMonteCarlo,
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::ImportanceSampling => "IS",
            Estimator::CrudeMonteCarlo => "crude-MC",
        }
    }

    pub fn run(&self, problem: &HypoexpProblem, config: &IsConfig) -> Result<EstimateResult> {
        match self {
            Estimator::ImportanceSampling => is_estimate(problem, config),
            Estimator::CrudeMonteCarlo => crude_mc_estimate(problem, config),
        }
    }
}

/// Plain Monte Carlo: the fraction of `X_i ~ exp(l_i)` vectors with `sum X_i <= t`.
pub fn crude_mc_estimate(problem: &HypoexpProblem, config: &IsConfig) -> Result<EstimateResult> {
    if config.sample_size == 0 {
        return Err(Error::InvalidSampleSize);
    }
    let rates = problem.unit_rates().as_slice();
    let mut rng = stream_rng(config.seed, config.stream);
    let mut accepted = 0u64;
    let start = Instant::now();
    for _ in 0..config.sample_size {
        let total: f64 = rates.iter().map(|&l| exponential(&mut rng, l)).sum();
        if total <= 1.0 {
            accepted += 1;
        }
    }
    let n = config.sample_size as f64;
    Ok(EstimateResult {
        estimate: accepted as f64 / n,
        log_estimate: (accepted as f64).ln() - n.ln(),
        samples: config.sample_size,
        accepted,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        seed: config.seed,
        stream: config.stream,
    })
}

/// Aggregate of K independent runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub algorithm: &'static str,
    pub per_run_estimates: Vec<f64>,
    pub mean: f64,
    pub sample_std: f64,
    /// `sample_std / mean`; `None` when every run returned 0.
    pub re_hat: Option<f64>,
    /// `total_cpu_seconds * re_hat^2`.
    pub rtv: Option<f64>,
    pub total_cpu_seconds: f64,
    pub sample_size: u64,
    pub runs: usize,
    pub master_seed: u64,
}

impl TrialSummary {
    /// Builds the statistics from per-run estimates and their summed run time.
    pub fn from_runs(
        algorithm: &'static str,
        per_run_estimates: Vec<f64>,
        total_cpu_seconds: f64,
        sample_size: u64,
        master_seed: u64,
    ) -> Result<Self> {
        let runs = per_run_estimates.len();
        if runs < 2 {
            return Err(Error::InvalidTrialCount(runs));
        }
        let k = runs as f64;
        let mean = per_run_estimates.iter().sum::<f64>() / k;
        let variance =
            per_run_estimates.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
        let sample_std = variance.sqrt();
        let re_hat = (mean > 0.0).then(|| sample_std / mean);
        let rtv = re_hat.map(|re| total_cpu_seconds * re * re);
        Ok(TrialSummary {
            algorithm,
            per_run_estimates,
            mean,
            sample_std,
            re_hat,
            rtv,
            total_cpu_seconds,
            sample_size,
            runs,
            master_seed,
        })
    }

    pub fn re_defined(&self) -> bool {
        self.re_hat.is_some()
    }
}

/// K runs of `estimator` with `sample_size` replications each; run `k` uses
/// stream `k` of `master_seed`. Runs execute in parallel and are collected in
/// trial order, so the estimates do not depend on scheduling.
pub fn run_trials(
    problem: &HypoexpProblem,
    estimator: Estimator,
    sample_size: u64,
    runs: usize,
    master_seed: u64,
) -> Result<TrialSummary> {
    if runs < 2 {
        return Err(Error::InvalidTrialCount(runs));
    }
    let base = IsConfig::new(sample_size, master_seed)?;
    let results: Vec<EstimateResult> = (0..runs as u64)
        .into_par_iter()
        .map(|k| estimator.run(problem, &base.with_stream(k)))
        .collect::<Result<_>>()?;
    let total_cpu_seconds = results.iter().map(|r| r.elapsed_seconds).sum();
    TrialSummary::from_runs(
        estimator.name(),
        results.iter().map(|r| r.estimate).collect(),
        total_cpu_seconds,
        sample_size,
        master_seed,
    )
}
