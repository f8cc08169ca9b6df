//! Exact double-precision routes and the dispatcher between them.

mod expm;
mod ross;
mod survival;

use serde::Serialize;

pub use expm::{matrix_exponential, one_norm};
pub use ross::{ross_cdf, StabilityReport, Verdict, CATASTROPHIC_DIGITS, RANGE_SLACK, SUSPECT_DIGITS};
pub use survival::{build_subgenerator, expm_survival, Subgenerator, Survival};

use crate::error::Result;
use crate::types::HypoexpProblem;

/// Below this a double-precision CDF is mostly rounding noise (1000 machine epsilons).
pub const FLOOR_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactRoute {
    Ross,
    Expm,
}

impl std::fmt::Display for ExactRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExactRoute::Ross => "ross",
            ExactRoute::Expm => "expm",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactResult {
    pub value: f64,
    pub route: ExactRoute,
    /// Value below [`FLOOR_THRESHOLD`]: use the importance-sampling estimator instead.
    pub floor_regime: bool,
    /// Closed-form diagnostics, when the rates were distinct.
    pub ross: Option<(f64, StabilityReport)>,
    pub survival: Option<Survival>,
}

/// Closed form when the rates are distinct and it is stable, otherwise `1 - survival`.
pub fn exact_cdf(problem: &HypoexpProblem) -> Result<ExactResult> {
    let ross = ross_cdf(problem).ok();
    if let Some((value, report)) = ross {
        if report.verdict == Verdict::Stable {
            return Ok(ExactResult {
                value,
                route: ExactRoute::Ross,
                floor_regime: value < FLOOR_THRESHOLD,
                ross,
                survival: None,
            });
        }
    }
    let survival = expm_survival(problem)?;
    let value = survival.cdf();
    Ok(ExactResult {
        value,
        route: ExactRoute::Expm,
        floor_regime: value < FLOOR_THRESHOLD,
        ross,
        survival: Some(survival),
    })
}
