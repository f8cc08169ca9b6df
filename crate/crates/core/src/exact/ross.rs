//! Closed-form CDF for distinct rates,
//!
//! `F(t) = 1 - sum_i exp(-l_i t) prod_{j != i} l_j / (l_j - l_i)`,
//!
//! evaluated in plain double precision in O(n^2). The alternating terms can be
//! many orders of magnitude larger than the result, so the value is returned
//! as computed, never clamped, together with a [`StabilityReport`] that
//! measures the cancellation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::HypoexpProblem;

/// Outside `[-RANGE_SLACK, 1 + RANGE_SLACK]` a CDF value is garbage.
pub const RANGE_SLACK: f64 = 1e-9;
/// Cancellation beyond this many decimal digits leaves fewer than ~8 good digits.
pub const SUSPECT_DIGITS: f64 = 8.0;
/// Cancellation beyond this many digits exhausts double precision.
pub const CATASTROPHIC_DIGITS: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Suspect,
    Catastrophic,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "stable",
            Verdict::Suspect => "suspect",
            Verdict::Catastrophic => "catastrophic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    /// Smallest `|l_i - l_j|` over `i != j`; `+inf` for a single rate.
    pub min_rate_gap: f64,
    /// Largest `|exp(-l_i t) prod_j l_j / (l_j - l_i)|`; may be `+inf`.
    pub max_term_magnitude: f64,
    /// `log10(max_term_magnitude / |result|)`, floored at 0; `+inf` when the result is 0.
    pub cancellation_digits: f64,
    pub verdict: Verdict,
}

/// Returns the raw closed-form value and its stability report.
pub fn ross_cdf(problem: &HypoexpProblem) -> Result<(f64, StabilityReport)> {
    let rates = problem.rates();
    if let Some((first, second)) = rates.first_duplicate() {
        return Err(Error::DuplicateRates { first, second, value: rates.as_slice()[first] });
    }
    let unit = problem.unit_rates().as_slice();

    let mut total = 0.0;
    let mut max_ln_term = f64::NEG_INFINITY;
    for (i, &li) in unit.iter().enumerate() {
        let mut term = (-li).exp();
        let mut ln_term = -li;
        for (j, &lj) in unit.iter().enumerate() {
            if i != j {
                term *= lj / (lj - li);
                ln_term += lj.ln() - (lj - li).abs().ln();
            }
        }
        total += term;
        max_ln_term = max_ln_term.max(ln_term);
    }
    let value = 1.0 - total;

    let raw = rates.as_slice();
    let mut min_rate_gap = f64::INFINITY;
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            min_rate_gap = min_rate_gap.min((raw[i] - raw[j]).abs());
        }
    }
    let report = assess(value, max_ln_term, min_rate_gap);
    Ok((value, report))
}

fn assess(value: f64, max_ln_term: f64, min_rate_gap: f64) -> StabilityReport {
    let cancellation_digits = if value == 0.0 {
        f64::INFINITY
    } else {
        ((max_ln_term - value.abs().ln()) / std::f64::consts::LN_10).max(0.0)
    };
    let out_of_range = !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&value);
    let verdict = if out_of_range || !value.is_finite() || cancellation_digits >= CATASTROPHIC_DIGITS {
        Verdict::Catastrophic
    } else if cancellation_digits >= SUSPECT_DIGITS {
        Verdict::Suspect
    } else {
        Verdict::Stable
    };
    StabilityReport {
        min_rate_gap,
        max_term_magnitude: max_ln_term.exp(),
        cancellation_digits,
        verdict,
    }
}
