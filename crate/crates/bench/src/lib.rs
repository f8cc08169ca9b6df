//! Shared fixtures for the benchmarks.

use hypoexp_core::{validate_problem, HypoexpProblem};

/// `n` distinct rates spread over [1, 2], evaluated at `t = 1`.
pub fn spread_problem(n: usize) -> HypoexpProblem {
    let rates: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / n as f64).collect();
    validate_problem(&rates, 1.0).expect("valid fixture")
}

/// `n` copies of rate 0.03 at `t = 1`, deep in the rare-event regime.
pub fn rare_problem(n: usize) -> HypoexpProblem {
    validate_problem(&vec![0.03; n], 1.0).expect("valid fixture")
}
