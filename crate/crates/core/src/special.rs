//! Integer-order special functions behind the Erlang oracle and the
//! second-moment analysis of the importance-sampling estimator.
//!
//! * `gamma(n, x) = int_0^x t^(n-1) e^(-t) dt`, the lower incomplete gamma function
//! * `I(n, x)     = int_0^x t^(n-1) e^(+t) dt`, the exponential-moment integral
//!
//! Both are evaluated from positive-term series whose leading factor is kept
//! in log space, so results near `1e-300` keep full relative accuracy.

use statrs::function::factorial::{factorial, ln_factorial};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Series terms below this fraction of the partial sum are dropped.
const SERIES_CUTOFF: f64 = 1e-18;
const MAX_SERIES_TERMS: usize = 100_000;

fn check_domain(n: u32, x: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(x));
    }
    Ok(())
}

/// `sum_{k>=0} prod_{j=1..k} ratio(j)`, stopping once a term falls below the cutoff.
///
/// `ratio(k)` is the ratio between term `k` and term `k-1`; the loop keeps going
/// while terms grow, so it is safe for series that peak late.
fn positive_series(mut ratio: impl FnMut(usize) -> f64) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.add(1.0);
    let mut term = 1.0;
    for k in 1..MAX_SERIES_TERMS {
        let r = ratio(k);
        term *= r;
        acc.add(term);
        if r < 1.0 && term < SERIES_CUTOFF * acc.value() {
            break;
        }
    }
    acc.value()
}

/// ln of the Poisson tail `P(Poisson(x) >= n) = e^-x sum_{k>=n} x^k / k!`,
/// summed from `k = n` upward. Requires `0 < x <= n`.
fn ln_poisson_upper_tail(n: u32, x: f64) -> f64 {
    let n = n as usize;
    let ln_first = n as f64 * x.ln() - x - ln_factorial(n as u64);
    let scaled = positive_series(|k| x / (n + k) as f64);
    ln_first + scaled.ln()
}

/// `e^-x sum_{k<n} x^k / k!`, summed from `k = n - 1` downward. Requires `x > n`.
fn poisson_lower_sum(n: u32, x: f64) -> f64 {
    let top = (n - 1) as usize;
    let ln_first = top as f64 * x.ln() - x - ln_factorial(top as u64);
    let mut acc = CompensatedSum::new();
    let mut term = 1.0;
    acc.add(term);
    for k in (1..=top).rev() {
        term *= k as f64 / x;
        acc.add(term);
        if term < SERIES_CUTOFF * acc.value() {
            break;
        }
    }
    (ln_first + acc.value().ln()).exp()
}

/// Regularized lower incomplete gamma `P(n, x) = gamma(n, x) / (n-1)!`.
///
/// For `x <= n` this is the Poisson upper tail, which keeps its relative
/// accuracy all the way down to the smallest normal doubles. Beyond that the
/// complement `1 - e^-x sum_{k<n} x^k/k!` is at most about one half and loses
/// nothing to cancellation.
pub fn regularized_lower_gamma(n: u32, x: f64) -> Result<f64> {
    check_domain(n, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= n as f64 {
        Ok(ln_poisson_upper_tail(n, x).exp())
    } else {
        Ok(1.0 - poisson_lower_sum(n, x))
    }
}

/// Lower incomplete gamma function `gamma(n, x)` for integer order `n >= 1`.
pub fn lower_incomplete_gamma(n: u32, x: f64) -> Result<f64> {
    check_domain(n, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= n as f64 {
        // gamma(n, x) = (n-1)! P(Poisson(x) >= n) = x^n e^-x / n * sum_k x^k n!/(n+k)!
        let nf = n as f64;
        let scaled = positive_series(|k| x / (n as usize + k) as f64);
        Ok((nf * x.ln() - x - nf.ln() + scaled.ln()).exp())
    } else {
        Ok(factorial((n - 1) as u64) * (1.0 - poisson_lower_sum(n, x)))
    }
}

/// Exponential-moment integral `I(n, x) = int_0^x t^(n-1) e^t dt`.
///
/// Evaluated as `x^n sum_{k>=0} x^k / (k! (n+k))`, a series of positive terms.
/// Returns `+inf` once the value exceeds the double range (roughly `x > 700`).
pub fn exp_moment_integral(n: u32, x: f64) -> Result<f64> {
    check_domain(n, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    // term_k / term_{k-1} = x/k * (n+k-1)/(n+k)
    let scaled = positive_series(|k| {
        let kf = k as f64;
        x / kf * (nf + kf - 1.0) / (nf + kf)
    });
    Ok((nf * x.ln() - nf.ln() + scaled.ln()).exp())
}

/// `P(Erlang(n, rate) <= t) = gamma(n, rate t) / (n-1)!`.
pub fn erlang_cdf(n: u32, rate: f64, t: f64) -> Result<f64> {
    if !rate.is_finite() {
        return Err(Error::NonFiniteInput { what: "rate", value: rate });
    }
    if rate <= 0.0 {
        return Err(Error::NonPositiveRate { index: 0, value: rate });
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(t));
    }
    regularized_lower_gamma(n, rate * t)
}

/// Upper bound `n^(n + 1/2) e^(1 - n) >= n!`.
pub fn stirling_upper_bound(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    let nf = n as f64;
    let value = ((nf + 0.5) * nf.ln() - nf + 1.0).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(n))
    }
}


#[cfg(test)]
mod tests {
    use super::quadrature::integrate;
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_order_one_is_exponential_cdf() {
        for &x in &[1e-8f64, 0.03, 0.5, 1.0, 3.0, 40.0] {
            let expected = -(-x).exp_m1();
            assert!(rel(lower_incomplete_gamma(1, x).unwrap(), expected) < 1e-14, "x={x}");
        }
    }

    #[test]
    fn gamma_at_zero_is_zero() {
        for n in 1..20 {
            assert_eq!(lower_incomplete_gamma(n, 0.0).unwrap(), 0.0);
            assert_eq!(exp_moment_integral(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn gamma_ten_small_argument_matches_quadrature() {
        let oracle = integrate(|t| t.powi(9) * (-t).exp(), 0.0, 0.03, 1e-15);
        // Frozen from 60-digit quadrature: 5.746051311745639221e-17.
        assert!(rel(oracle, 5.746051311745639221e-17) < 1e-12);
        assert!(rel(lower_incomplete_gamma(10, 0.03).unwrap(), oracle) < 1e-12);
    }

    #[test]
    fn gamma_matches_quadrature_on_a_grid() {
        for n in [1u32, 2, 5, 10, 17] {
            for &x in &[0.01, 0.3, 1.0, 4.0, 9.5, 12.0, 25.0] {
                let oracle = integrate(|t| t.powi(n as i32 - 1) * (-t).exp(), 0.0, x, 1e-14);
                let got = lower_incomplete_gamma(n, x).unwrap();
                assert!(rel(got, oracle) < 1e-11, "n={n} x={x}: {got} vs {oracle}");
            }
        }
    }

    #[test]
    fn gamma_tends_to_factorial() {
        assert!(rel(lower_incomplete_gamma(5, 200.0).unwrap(), 24.0) < 1e-15);
        assert!(rel(regularized_lower_gamma(30, 500.0).unwrap(), 1.0) < 1e-15);
    }

    #[test]
    fn gamma_rejects_order_zero() {
        assert_eq!(lower_incomplete_gamma(0, 1.0).unwrap_err(), Error::InvalidOrder(0));
        assert_eq!(exp_moment_integral(0, 1.0).unwrap_err(), Error::InvalidOrder(0));
        assert!(lower_incomplete_gamma(3, -1.0).is_err());
        assert!(lower_incomplete_gamma(3, f64::NAN).is_err());
    }

    #[test]
    fn exp_moment_base_case() {
        for &x in &[1e-6, 0.2, 1.0, 5.0, 30.0] {
            assert!(rel(exp_moment_integral(1, x).unwrap(), x.exp_m1()) < 1e-14, "x={x}");
        }
    }

    #[test]
    fn exp_moment_three_two_matches_quadrature() {
        let oracle = integrate(|t| t * t * t.exp(), 0.0, 2.0, 1e-15);
        // Frozen from 60-digit quadrature: 12.77811219786130045446.
        assert!(rel(oracle, 12.778_112_197_861_300_454) < 1e-12);
        assert!(rel(exp_moment_integral(3, 2.0).unwrap(), oracle) < 1e-10);
        // Closed form e^2 (x^2 - 2x + 2) - 2 at x = 2.
        assert!(rel(exp_moment_integral(3, 2.0).unwrap(), 2.0 * 2f64.exp() - 2.0) < 1e-13);
    }

    #[test]
    fn exp_moment_matches_recurrence_where_it_is_stable() {
        // I(k, x) = x^(k-1) e^x - (k-1) I(k-1, x) is well conditioned for x >= k.
        let x: f64 = 25.0;
        let mut prev = x.exp_m1();
        for k in 2..=15u32 {
            let next = x.powi(k as i32 - 1) * x.exp() - (k - 1) as f64 * prev;
            assert!(rel(exp_moment_integral(k, x).unwrap(), next) < 1e-10, "k={k}");
            prev = next;
        }
    }

    #[test]
    fn erlang_special_cases() {
        let (lambda, t) = (0.7, 2.3);
        assert!(rel(erlang_cdf(1, lambda, t).unwrap(), -(-lambda * t).exp_m1()) < 1e-14);
        // Frozen from 60-digit evaluation of gamma(10, x)/9! at the f64 nearest 0.03 and 0.01.
        assert!(rel(erlang_cdf(10, 0.03, 1.0).unwrap(), 1.583_457_702_751_773_9e-22) < 1e-12);
        assert!(rel(erlang_cdf(10, 0.01, 1.0).unwrap(), 2.730_794_283_696_246_5e-27) < 1e-12);
        assert!(rel(erlang_cdf(10, 10.0, 1.0).unwrap(), 0.542_070_285_528_147_79) < 1e-13);
        assert_eq!(erlang_cdf(4, 1.0, 0.0).unwrap(), 0.0);
        assert!(erlang_cdf(4, 0.0, 1.0).is_err());
        assert!(erlang_cdf(4, 1.0, -1.0).is_err());
    }

    #[test]
    fn erlang_cdf_matches_truncated_poisson_tail() {
        // Independent route: brute-force tail sum with 200 terms at moderate x.
        for n in [2u32, 6, 11] {
            for &x in &[0.05f64, 0.8, 3.0] {
                let mut term = (-x).exp();
                let mut tail = 0.0;
                for k in 0..200u32 {
                    if k >= n {
                        tail += term;
                    }
                    term *= x / (k + 1) as f64;
                }
                assert!(rel(erlang_cdf(n, x, 1.0).unwrap(), tail) < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_upper_bound(1).unwrap(), 1.0);
        assert!((stirling_upper_bound(2).unwrap() - 2.081_040_380_091_555_7).abs() < 1e-12);
        assert!(rel(stirling_upper_bound(10).unwrap(), 3_902_560.665_090_631) < 1e-12);
        assert!(stirling_upper_bound(10).unwrap() >= 3_628_800.0);
        assert_eq!(stirling_upper_bound(0).unwrap_err(), Error::InvalidOrder(0));
        assert_eq!(stirling_upper_bound(200).unwrap_err(), Error::Overflow(200));
    }

    #[test]
    fn stirling_dominates_factorial() {
        for n in 1..=170u32 {
            assert!(factorial(n as u64) <= stirling_upper_bound(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn exp_moment_bound_fails_beyond_n() {
        // I(n, x) <= x^n e^n / n only holds for x <= n: at n = 1, x = 2 we get
        // e^2 - 1 = 6.389 against 2e = 5.437.
        let lhs = exp_moment_integral(1, 2.0).unwrap();
        let rhs = 2.0 * 1f64.exp();
        assert!(lhs > rhs);
    }

    proptest! {
        #[test]
        fn regularized_gamma_is_a_cdf(n in 1u32..40, a in 0.0f64..80.0, b in 0.0f64..80.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p_lo = regularized_lower_gamma(n, lo).unwrap();
            let p_hi = regularized_lower_gamma(n, hi).unwrap();
            prop_assert!((0.0..=1.0).contains(&p_lo));
            prop_assert!((0.0..=1.0).contains(&p_hi));
            prop_assert!(p_lo <= p_hi * (1.0 + 1e-13));
        }

        #[test]
        fn exp_moment_is_nondecreasing(n in 1u32..40, a in 0.0f64..80.0, b in 0.0f64..80.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let i_lo = exp_moment_integral(n, lo).unwrap();
            let i_hi = exp_moment_integral(n, hi).unwrap();
            prop_assert!(i_lo >= 0.0);
            prop_assert!(i_lo <= i_hi * (1.0 + 1e-13));
        }

        #[test]
        fn gamma_and_exp_moment_obey_their_bounds(n in 1u32..=30, frac in 0.0001f64..1.0) {
            let nf = n as f64;
            let x = frac * nf;
            let i = exp_moment_integral(n, x).unwrap();
            let i_bound = (nf * x.ln() + nf - nf.ln()).exp();
            prop_assert!(i <= i_bound * (1.0 + 1e-12));
            let g = lower_incomplete_gamma(n, x).unwrap();
            let g_bound = (nf * x.ln() - nf.ln() - x).exp();
            prop_assert!(g >= g_bound * (1.0 - 1e-12));
        }
    }
}
