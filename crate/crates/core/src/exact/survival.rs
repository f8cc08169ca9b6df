//! Survival function `P(sum X_i > t) = e_1 exp(D t) 1` through the matrix
//! exponential of the bidiagonal subgenerator `D`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::exact::expm::matrix_exponential;
use crate::types::{HypoexpProblem, RateVector};

/// Upper-bidiagonal subgenerator: `-l_i` on the diagonal, `l_i` right of it.
///
/// Row `i < n` sums to zero and row `n` to `-l_n`: absorption happens only
/// from the last phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgenerator(DMatrix<f64>);

impl Subgenerator {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.nrows()
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }
}

pub fn build_subgenerator(rates: &RateVector) -> Subgenerator {
    let l = rates.as_slice();
    let n = l.len();
    Subgenerator(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            -l[i]
        } else if j == i + 1 {
            l[i]
        } else {
            0.0
        }
    }))
}

/// Survival value straight from the matrix exponential, plus the same value clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Survival {
    pub raw: f64,
    pub clamped: f64,
}

impl Survival {
    /// `1 - raw`, the CDF as the matrix route sees it. Not clamped.
    pub fn cdf(&self) -> f64 {
        1.0 - self.raw
    }
}

pub fn expm_survival(problem: &HypoexpProblem) -> Result<Survival> {
    let d = build_subgenerator(problem.unit_rates());
    let e = matrix_exponential(d.matrix())?;
    let raw: f64 = e.row(0).iter().sum();
    Ok(Survival { raw, clamped: raw.clamp(0.0, 1.0) })
}
