//! Cumulative distribution function of the hypoexponential distribution
//! (sums of independent exponentials with possibly distinct rates).
//!
//! Three families of algorithms live here:
//!
//! * [`exact`]: the closed-form alternating sum and the matrix-exponential
//!   survival function, both in double precision, with diagnostics that expose
//!   when they break down.
//! * [`importance`]: an unbiased importance-sampling estimator with bounded
//!   relative error, for probabilities far below double-precision epsilon.
//! * [`precision`] and [`special`]: extended-precision and special-function
//!   oracles used for validation.
//!
//! [`harness`] runs repeated trials and renders comparison tables.

pub mod error;
pub mod exact;
pub mod harness;
pub mod importance;
pub mod numeric;
pub mod precision;
pub mod rng;
pub mod special;
pub mod types;

pub use error::{Error, Result};
pub use exact::{
    build_subgenerator, exact_cdf, expm_survival, matrix_exponential, ross_cdf, ExactResult,
    ExactRoute, StabilityReport, Subgenerator, Survival, Verdict,
};
pub use harness::{
    builtin_models, crude_mc_estimate, reproduce_tables, run_trials, Estimator, ModelSpec,
    OracleProvenance, OutputFormat, SamplePolicy, TableRow, TrialSummary,
};
pub use importance::{
    empirical_second_moment_ratio, is_estimate, re_bound, sample_weight,
    second_moment_ratio_bound, EstimateResult, IsConfig,
};
pub use precision::{highprecision_confluent_cdf, highprecision_hypoexp_cdf, DEFAULT_DIGITS};
pub use special::{
    erlang_cdf, exp_moment_integral, lower_incomplete_gamma, regularized_lower_gamma,
    stirling_upper_bound,
};
pub use types::{validate_problem, HypoexpProblem, RateVector};
