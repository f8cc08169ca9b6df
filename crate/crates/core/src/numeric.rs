//! Summation helpers shared by the special functions and the estimators.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Streaming accumulator for `sum exp(x_i)` given the `x_i`.
///
/// Holds the running maximum `m` and `s = sum exp(x_i - m)`, so that the total
/// is `exp(m) * s` without overflowing or underflowing on the way. Adding
/// `-inf` is a no-op.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: CompensatedSum,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, scaled: CompensatedSum::new() }
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, log_value: f64) {
        if log_value == f64::NEG_INFINITY {
            return;
        }
        if log_value <= self.max {
            self.scaled.add((log_value - self.max).exp());
        } else {
            let factor = (self.max - log_value).exp();
            let rescaled = self.scaled.value() * factor;
            self.scaled = CompensatedSum::new();
            self.scaled.add(rescaled);
            self.scaled.add(1.0);
            self.max = log_value;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.max == f64::NEG_INFINITY
    }

    /// Running maximum of the added logs.
    pub fn max(&self) -> f64 {
        self.max
    }

    /// `sum exp(x_i - max)`, at least 1 unless empty.
    pub fn scaled_sum(&self) -> f64 {
        self.scaled.value()
    }

    /// `ln(sum exp(x_i))`; `-inf` when empty.
    pub fn ln(&self) -> f64 {
        if self.is_empty() {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.value().ln()
        }
    }
}
