//! Compensated summation.
//!
//! Alternating-sign weights make plain left-to-right accumulation lose most of
//! its significant digits, so every weighted sum in this crate goes through
//! [`CompensatedSum`] (Neumaier's variant of Kahan summation).

/// Running sum with a second-order error term.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
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

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of an iterator.
pub fn sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Compensated running sums: element `k` is the sum of `values[..=k]`.
pub fn cumulative(values: &[f64]) -> Vec<f64> {
    let mut acc = CompensatedSum::new();
    values
        .iter()
        .map(|&v| {
            acc.add(v);
            acc.value()
        })
        .collect()
}

/// A weighted sum together with the magnitude it was formed from.
///
/// `scale` is the sum of absolute values of the summed terms. It is the
/// yardstick for deciding whether a small negative result is rounding noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSum {
    pub value: f64,
    pub scale: f64,
}

impl ScaledSum {
    pub fn of<I: IntoIterator<Item = f64>>(terms: I) -> Self {
        let mut acc = CompensatedSum::new();
        let mut scale = CompensatedSum::new();
        for t in terms {
            acc.add(t);
            scale.add(t.abs());
        }
        ScaledSum {
            value: acc.value(),
            scale: scale.value(),
        }
    }

    /// `true` unless the value is negative beyond `rel * scale`.
    pub fn is_nonnegative(&self, rel: f64) -> bool {
        self.value >= -rel * self.scale
    }
}
