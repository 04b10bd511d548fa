//! Log-space helpers. A log-weight of `-inf` is the explicit zero.

use alloc::vec::Vec;

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Streaming log-sum-exp with a running max shift. The accumulation order is
/// the insertion order, so results are reproducible.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * exp(self.max - x) + 1.0;
            self.max = x;
        } else {
            self.sum += exp(x - self.max);
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + ln(self.sum)
        }
    }
}

pub fn log_sum_exp<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = LogSumExp::new();
    for x in it {
        acc.push(x);
    }
    acc.value()
}

/// `ln k!` for `k = 0..=n`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += ln(k as f64);
        out.push(acc);
    }
    out
}

/// `count * log_value`, treating `0 * -inf` as zero.
#[inline]
pub fn scaled_log(count: u64, log_value: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * log_value
    }
}
