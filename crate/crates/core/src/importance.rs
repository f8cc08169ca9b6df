//! Importance-sampling estimator of `P(X_1 + ... + X_n <= 1)`.
//!
//! Proposal draws `Y_i ~ exp(n)` replace `X_i ~ exp(l_i)`. Each replication
//! contributes
//!
//! `Z = 1{sum Y_i <= 1} prod_i l_i e^(-l_i Y_i) / (n e^(-n Y_i))`,
//!
//! so `E[Z]` is the target probability. Its second moment satisfies
//! `E[Z^2] / E[Z]^2 <= sqrt(n) e^(2 (l_max - l_min) + 1)`, which bounds the
//! relative error independently of how rare the event is. A general threshold
//! `t` is handled by the rescaling `l_i -> l_i t`.
//!
//! Weights are formed in log space, as `sum_i ln(l_i / n) + (n - l_i) Y_i`, and
//! accumulated with a streaming log-sum-exp.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::LogSumExp;
use crate::rng::{exponential, stream_rng};
use crate::types::{HypoexpProblem, RateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsConfig {
    pub sample_size: u64,
    pub seed: u64,
    /// Stream index within `seed`; trial `k` of a batch uses stream `k`.
    pub stream: u64,
}

impl IsConfig {
    pub fn new(sample_size: u64, seed: u64) -> Result<Self> {
        if sample_size == 0 {
            return Err(Error::InvalidSampleSize);
        }
        Ok(IsConfig { sample_size, seed, stream: 0 })
    }

    pub fn with_stream(self, stream: u64) -> Self {
        IsConfig { stream, ..self }
    }
}

/// One estimator run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateResult {
    pub estimate: f64,
    /// Natural log of `estimate`; `-inf` when nothing was accepted.
    pub log_estimate: f64,
    pub samples: u64,
    pub accepted: u64,
    pub elapsed_seconds: f64,
    pub seed: u64,
    pub stream: u64,
}

impl EstimateResult {
    pub(crate) fn from_log_sum(
        sum: &LogSumExp,
        accepted: u64,
        config: &IsConfig,
        elapsed_seconds: f64,
    ) -> Self {
        let samples = config.sample_size;
        let (estimate, log_estimate) = if sum.is_empty() {
            (0.0, f64::NEG_INFINITY)
        } else {
            (
                sum.max().exp() * (sum.scaled_sum() / samples as f64),
                sum.ln() - (samples as f64).ln(),
            )
        };
        EstimateResult {
            estimate,
            log_estimate,
            samples,
            accepted,
            elapsed_seconds,
            seed: config.seed,
            stream: config.stream,
        }
    }

    pub fn log10_estimate(&self) -> f64 {
        self.log_estimate / std::f64::consts::LN_10
    }
}

/// Precomputed pieces of the log likelihood ratio for unit-threshold rates.
struct LogRatio {
    proposal_rate: f64,
    offset: f64,
    slopes: Vec<f64>,
}

impl LogRatio {
    fn new(unit_rates: &RateVector) -> Self {
        let n = unit_rates.len() as f64;
        LogRatio {
            proposal_rate: n,
            offset: unit_rates.iter().map(|l| (l / n).ln()).sum(),
            slopes: unit_rates.iter().map(|l| n - l).collect(),
        }
    }

    fn eval(&self, draws: &[f64]) -> f64 {
        self.offset + self.slopes.iter().zip(draws).map(|(s, y)| s * y).sum::<f64>()
    }
}

/// Likelihood-ratio weight of one proposal vector (zero when `sum y_i > 1`).
///
/// `rates` are in unit-threshold form; `draws` must hold one positive value per rate.
pub fn sample_weight(rates: &RateVector, draws: &[f64]) -> Result<f64> {
    Ok(ln_sample_weight(rates, draws)?.exp())
}

/// Natural log of [`sample_weight`]; `-inf` for a rejected draw.
pub fn ln_sample_weight(rates: &RateVector, draws: &[f64]) -> Result<f64> {
    if draws.len() != rates.len() {
        return Err(Error::DimensionMismatch { expected: rates.len(), got: draws.len() });
    }
    if let Some(&bad) = draws.iter().find(|y| !(y.is_finite() && **y > 0.0)) {
        return Err(Error::InvalidArgument(bad));
    }
    if draws.iter().sum::<f64>() > 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(LogRatio::new(rates).eval(draws))
}

/// Runs the sampling loop, handing each accepted log weight to `visit`.
/// Returns the accepted count and the loop's wall-clock seconds.
fn sample_loop(problem: &HypoexpProblem, config: &IsConfig, mut visit: impl FnMut(f64)) -> (u64, f64) {
    let ratio = LogRatio::new(problem.unit_rates());
    let n = problem.n();
    let mut rng = stream_rng(config.seed, config.stream);
    let mut draws = vec![0.0; n];
    let mut accepted = 0u64;

    let start = Instant::now();
    for _ in 0..config.sample_size {
        let mut total = 0.0;
        for y in draws.iter_mut() {
            *y = exponential(&mut rng, ratio.proposal_rate);
            total += *y;
        }
        if total <= 1.0 {
            accepted += 1;
            visit(ratio.eval(&draws));
        }
    }
    (accepted, start.elapsed().as_secs_f64())
}

/// Importance-sampling estimate with `config.sample_size` replications.
pub fn is_estimate(problem: &HypoexpProblem, config: &IsConfig) -> Result<EstimateResult> {
    if config.sample_size == 0 {
        return Err(Error::InvalidSampleSize);
    }
    let mut sum = LogSumExp::new();
    let (accepted, elapsed) = sample_loop(problem, config, |lw| sum.add(lw));
    Ok(EstimateResult::from_log_sum(&sum, accepted, config, elapsed))
}

/// Upper bound `sqrt(n) e^(2 (l_max - l_min) + 1)` on `E[Z^2] / E[Z]^2`, for unit-threshold rates.
pub fn second_moment_ratio_bound(rates: &RateVector) -> f64 {
    let n = rates.len() as f64;
    n.sqrt() * (2.0 * (rates.max_rate() - rates.min_rate()) + 1.0).exp()
}

/// Bound on the relative error of one run with `sample_size` replications.
pub fn re_bound(rates: &RateVector, sample_size: u64) -> Result<f64> {
    if sample_size == 0 {
        return Err(Error::InvalidSampleSize);
    }
    Ok((second_moment_ratio_bound(rates) / sample_size as f64).sqrt())
}

/// Sample estimate of `E[Z^2] / E[Z]^2`, i.e. `N sum Z_i^2 / (sum Z_i)^2`.
pub fn empirical_second_moment_ratio(problem: &HypoexpProblem, config: &IsConfig) -> Result<f64> {
    if config.sample_size == 0 {
        return Err(Error::InvalidSampleSize);
    }
    let mut first = LogSumExp::new();
    let mut second = LogSumExp::new();
    let (accepted, _) = sample_loop(problem, config, |lw| {
        first.add(lw);
        second.add(2.0 * lw);
    });
    if accepted == 0 {
        return Err(Error::AllSamplesRejected(config.sample_size));
    }
    Ok(((config.sample_size as f64).ln() + second.ln() - 2.0 * first.ln()).exp())
}
