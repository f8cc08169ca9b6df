//! Extended-precision evaluation of the closed-form hypoexponential CDF
//!
//! `F(t) = 1 - sum_i exp(-l_i t) prod_{j != i} l_j / (l_j - l_i)`
//!
//! in binary floating point with a configurable number of decimal digits.
//! Every `f64` rate converts exactly, so the only error is rounding at the
//! working precision. Used as the reference for the double-precision routes.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

use crate::error::{Error, Result};
use crate::types::HypoexpProblem;

type Big = FBig<HalfEven, 2>;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;

const MIN_DIGITS: u32 = 30;

fn bits_for(digits: u32) -> usize {
    // log2(10) = 3.3219...; a few guard bits on top.
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 16
}

fn big(value: f64, bits: usize) -> Big {
    Big::try_from(value).expect("finite f64").with_precision(bits).value()
}

/// Closed form over already-rescaled (unit-threshold) rates.
fn closed_form(rates: &[Big], bits: usize) -> Big {
    let one = Big::ONE.with_precision(bits).value();
    let mut total = Big::ZERO.with_precision(bits).value();
    for (i, li) in rates.iter().enumerate() {
        let mut term = (-li.clone()).exp();
        for (j, lj) in rates.iter().enumerate() {
            if i != j {
                term = term * lj.clone() / (lj.clone() - li.clone());
            }
        }
        total += term;
    }
    one - total
}

/// Closed-form CDF at `digits` decimal digits. Rates must be pairwise distinct.
pub fn highprecision_hypoexp_cdf(problem: &HypoexpProblem, digits: u32) -> Result<f64> {
    if digits < MIN_DIGITS {
        return Err(Error::InsufficientPrecision(digits));
    }
    if let Some((first, second)) = problem.rates().first_duplicate() {
        return Err(Error::DuplicateRates { first, second, value: problem.rates().as_slice()[first] });
    }
    let bits = bits_for(digits);
    let t = big(problem.threshold(), bits);
    let rates: Vec<Big> = problem.rates().iter().map(|&r| big(r, bits) * t.clone()).collect();
    Ok(closed_form(&rates, bits).to_f64().value())
}

/// Closed-form CDF for rates that may repeat.
///
/// The `m` copies of a repeated rate `l` are split into `l (1 + k eps)`,
/// `k = 0..m-1`, with `eps = 10^(-digits / (2 m_max))`, where `m_max` is the
/// largest multiplicity. The CDF is smooth in the rates, so the split moves
/// the result by `O(eps)` relative, while cancellation between the split
/// terms costs about `(m_max - 1) digits / (2 m_max)` digits, under half of
/// the working precision. Use at least 150 digits for a result accurate to
/// double precision when rates repeat four times.
pub fn highprecision_confluent_cdf(problem: &HypoexpProblem, digits: u32) -> Result<f64> {
    if digits < MIN_DIGITS {
        return Err(Error::InsufficientPrecision(digits));
    }
    if problem.rates().first_duplicate().is_none() {
        return highprecision_hypoexp_cdf(problem, digits);
    }
    let raw = problem.rates().as_slice();
    let multiplicity = |r: f64| raw.iter().filter(|&&x| x == r).count();
    let max_multiplicity = raw.iter().map(|&r| multiplicity(r)).max().unwrap_or(1);

    let bits = bits_for(digits);
    let eps_exponent = (digits as usize).div_ceil(2 * max_multiplicity);
    let one = Big::ONE.with_precision(bits).value();
    let ten = Big::from(10u64).with_precision(bits).value();
    let eps = (0..eps_exponent).fold(one.clone(), |acc, _| acc / ten.clone());
    let t = big(problem.threshold(), bits);

    let rates: Vec<Big> = raw
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let copy = raw[..i].iter().filter(|&&x| x == r).count();
            let factor = one.clone() + eps.clone() * Big::from(copy as u64);
            big(r, bits) * factor * t.clone()
        })
        .collect();
    Ok(closed_form(&rates, bits).to_f64().value())
}
