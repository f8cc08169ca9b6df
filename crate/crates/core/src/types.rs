//! Validated problem types.
//!
//! A [`HypoexpProblem`] describes `P(X_1 + ... + X_n <= t)` for independent
//! `X_i ~ exp(rate_i)`. Every algorithm in the crate works on the unit-threshold
//! form `(t * rates, 1)`, obtained from [`HypoexpProblem::unit_rates`]; the
//! rescaled rates are computed once so that `(rates, t)` and `(t * rates, 1)`
//! hit bit-identical code paths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of strictly positive, finite exponential rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RateVector(Vec<f64>);

impl RateVector {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::EmptyRates);
        }
        for (index, &value) in rates.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteInput { what: "rate", value });
            }
            if value <= 0.0 {
                return Err(Error::NonPositiveRate { index, value });
            }
        }
        Ok(RateVector(rates))
    }

    /// `n` copies of the same rate.
    pub fn iid(rate: f64, n: usize) -> Result<Self> {
        Self::new(vec![rate; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn max_rate(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_rate(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// True when every rate equals the first one exactly.
    pub fn is_iid(&self) -> bool {
        self.0.iter().all(|&r| r == self.0[0])
    }

    /// First pair `(i, j)`, `i < j`, of exactly equal rates.
    pub fn first_duplicate(&self) -> Option<(usize, usize)> {
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] == self.0[j] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Each rate multiplied by `factor`. The factor is checked like a rate.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|r| r * factor).collect())
    }
}

impl TryFrom<Vec<f64>> for RateVector {
    type Error = Error;

    fn try_from(rates: Vec<f64>) -> Result<Self> {
        RateVector::new(rates)
    }
}

impl From<RateVector> for Vec<f64> {
    fn from(rates: RateVector) -> Self {
        rates.0
    }
}

impl<'a> IntoIterator for &'a RateVector {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `P(sum X_i <= threshold)` with `X_i ~ exp(rates[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct HypoexpProblem {
    rates: RateVector,
    threshold: f64,
    unit: RateVector,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    rates: RateVector,
    threshold: f64,
}

impl TryFrom<ProblemRepr> for HypoexpProblem {
    type Error = Error;

    fn try_from(repr: ProblemRepr) -> Result<Self> {
        HypoexpProblem::new(repr.rates, repr.threshold)
    }
}

impl From<HypoexpProblem> for ProblemRepr {
    fn from(p: HypoexpProblem) -> Self {
        ProblemRepr { rates: p.rates, threshold: p.threshold }
    }
}

impl HypoexpProblem {
    pub fn new(rates: RateVector, threshold: f64) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(Error::NonFiniteInput { what: "threshold", value: threshold });
        }
        if threshold <= 0.0 {
            return Err(Error::NonPositiveThreshold(threshold));
        }
        // rate * t may overflow or underflow to zero; that is an invalid problem too.
        let unit = rates.scaled(threshold)?;
        Ok(HypoexpProblem { rates, threshold, unit })
    }

    pub fn rates(&self) -> &RateVector {
        &self.rates
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn n(&self) -> usize {
        self.rates.len()
    }

    /// Rates of the equivalent unit-threshold problem, `rate_i * t`.
    pub fn unit_rates(&self) -> &RateVector {
        &self.unit
    }

    /// The equivalent problem with threshold 1.
    pub fn to_unit(&self) -> HypoexpProblem {
        HypoexpProblem::new(self.unit_rates().clone(), 1.0).expect("unit rates already validated")
    }
}

/// Validates raw input into a problem. Total: every input yields a problem or a typed error.
pub fn validate_problem(rates: &[f64], t: f64) -> Result<HypoexpProblem> {
    HypoexpProblem::new(RateVector::new(rates.to_vec())?, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn model_one_rates_are_valid() {
        let p = validate_problem(&[0.03; 10], 1.0).unwrap();
        assert_eq!(p.n(), 10);
        assert_eq!(p.rates().max_rate(), 0.03);
        assert!(p.rates().is_iid());
    }

    #[test]
    fn single_rate_is_valid() {
        let p = validate_problem(&[1.0], 1.0).unwrap();
        assert_eq!(p.n(), 1);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert_eq!(
            validate_problem(&[0.0, 1.0], 1.0).unwrap_err(),
            Error::NonPositiveRate { index: 0, value: 0.0 }
        );
        assert_eq!(validate_problem(&[], 1.0).unwrap_err(), Error::EmptyRates);
        assert!(matches!(
            validate_problem(&[1.0, f64::NAN], 1.0).unwrap_err(),
            Error::NonFiniteInput { what: "rate", .. }
        ));
        assert_eq!(validate_problem(&[1.0], 0.0).unwrap_err(), Error::NonPositiveThreshold(0.0));
        assert_eq!(validate_problem(&[1.0], -2.0).unwrap_err(), Error::NonPositiveThreshold(-2.0));
        assert!(matches!(
            validate_problem(&[1.0], f64::INFINITY).unwrap_err(),
            Error::NonFiniteInput { what: "threshold", .. }
        ));
        // 1e300 * 1e10 overflows.
        assert!(validate_problem(&[1e300], 1e10).is_err());
    }

    #[test]
    fn input_order_is_preserved() {
        let p = validate_problem(&[3.0, 1.0, 2.0], 2.0).unwrap();
        assert_eq!(p.rates().as_slice(), &[3.0, 1.0, 2.0]);
        assert_eq!(p.unit_rates().as_slice(), &[6.0, 2.0, 4.0]);
        assert_eq!(p.rates().min_rate(), 1.0);
        assert_eq!(p.rates().first_duplicate(), None);
    }

    #[test]
    fn serde_round_trip_revalidates() {
        let p = validate_problem(&[0.5, 0.25], 3.0).unwrap();
        let text = serde_json::to_string(p.rates()).unwrap();
        let back: RateVector = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, p.rates());
        assert!(serde_json::from_str::<RateVector>("[1.0, -1.0]").is_err());
    }

    proptest! {
        #[test]
        fn validation_is_total(
            rates in proptest::collection::vec(prop_oneof![
                any::<f64>(),
                Just(0.0),
                Just(f64::NAN),
                0.001f64..100.0,
            ], 0..8),
            t in prop_oneof![any::<f64>(), 0.01f64..10.0],
        ) {
            match validate_problem(&rates, t) {
                Ok(p) => {
                    prop_assert!(p.rates().iter().all(|r| r.is_finite() && *r > 0.0));
                    prop_assert!(p.unit_rates().iter().all(|r| r.is_finite() && *r > 0.0));
                    prop_assert!(p.rates().min_rate() <= p.rates().max_rate());
                    prop_assert_eq!(p.rates().as_slice(), &rates[..]);
                }
                Err(_) => {}
            }
        }
    }
}
