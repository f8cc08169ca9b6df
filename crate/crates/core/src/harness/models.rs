use serde::Serialize;

use crate::error::Result;
use crate::precision::highprecision_confluent_cdf;
use crate::special::erlang_cdf;
use crate::types::{HypoexpProblem, RateVector};

/// Working precision for oracles over repeated, non-identical rates.
pub const MODEL3_ORACLE_DIGITS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleProvenance {
    #[serde(rename = "poisson-tail")]
    PoissonTail,
    #[serde(rename = "extended-precision-ross")]
    ExtendedPrecisionRoss,
}

impl OracleProvenance {
    pub fn tag(&self) -> &'static str {
        match self {
            OracleProvenance::PoissonTail => "poisson-tail",
            OracleProvenance::ExtendedPrecisionRoss => "extended-precision-ross",
        }
    }
}

/// A named benchmark problem with its reference value, computed once at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    pub name: String,
    pub problem: HypoexpProblem,
    pub oracle_value: f64,
    pub provenance: OracleProvenance,
}

impl ModelSpec {
    /// Identical rates get the Erlang (Poisson-tail) oracle; anything else the
    /// extended-precision closed form, splitting repeated rates if necessary.
    pub fn new(name: impl Into<String>, problem: HypoexpProblem) -> Result<Self> {
        let rates = problem.rates();
        let (oracle_value, provenance) = if rates.is_iid() {
            let v = erlang_cdf(rates.len() as u32, rates.as_slice()[0], problem.threshold())?;
            (v, OracleProvenance::PoissonTail)
        } else {
            let v = highprecision_confluent_cdf(&problem, MODEL3_ORACLE_DIGITS)?;
            (v, OracleProvenance::ExtendedPrecisionRoss)
        };
        Ok(ModelSpec { name: name.into(), problem, oracle_value, provenance })
    }

    pub fn rates(&self) -> &RateVector {
        self.problem.rates()
    }
}

/// Ten-component models at `t = 1`: i.i.d. rate 0.03, i.i.d. rate 0.01, and
/// the repeating pattern 0.01, 0.011, 0.009 ending in 0.01.
pub fn builtin_models() -> Vec<ModelSpec> {
    let model3 = [0.01, 0.011, 0.009, 0.01, 0.011, 0.009, 0.01, 0.011, 0.009, 0.01];
    let defs: [(&str, Vec<f64>); 3] =
        [("model1", vec![0.03; 10]), ("model2", vec![0.01; 10]), ("model3", model3.to_vec())];
    defs.into_iter()
        .map(|(name, rates)| {
            let problem = HypoexpProblem::new(RateVector::new(rates)?, 1.0)?;
            ModelSpec::new(name, problem)
        })
        .collect::<Result<_>>()
        .expect("built-in models are valid")
}
