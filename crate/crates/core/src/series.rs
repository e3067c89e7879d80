// SPDX-License-Identifier: MIT OR Apache-2.0

//! Observed series plus the pre-sample fill used by the lagged regressors.

use crate::error::{Error, Result};

/// Number of leading observations averaged to fill pre-sample lags when no
/// other window is requested.
pub const DEFAULT_PRESAMPLE_WINDOW: usize = 20;

/// A univariate series `X_1, ..., X_n`, stored 0-based.
///
/// Autoregressive design matrices need lagged values `X_0, X_{-1}, ...` that
/// precede the sample. They are all filled with a single value, the mean of
/// the first `presample_window` observations.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesData {
    values: Vec<f64>,
    presample: f64,
    presample_window: usize,
}

impl SeriesData {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("series is empty"));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "observation {} is not finite ({})",
                pos + 1,
                values[pos]
            )));
        }
        let mut out = Self {
            values,
            presample: 0.0,
            presample_window: 0,
        };
        out.set_presample_window(DEFAULT_PRESAMPLE_WINDOW);
        Ok(out)
    }

    /// Recomputes the pre-sample fill as the mean of the first `window`
    /// observations (clamped to `1..=n`).
    pub fn with_presample_window(mut self, window: usize) -> Self {
        self.set_presample_window(window);
        self
    }

    fn set_presample_window(&mut self, window: usize) {
        let w = window.clamp(1, self.values.len());
        self.presample_window = w;
        self.presample = self.values[..w].iter().sum::<f64>() / w as f64;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn presample(&self) -> f64 {
        self.presample
    }

    pub fn presample_window(&self) -> usize {
        self.presample_window
    }

    /// Value `lag` steps before the observation stored at 0-based index `i`,
    /// i.e. `X_{i+1-lag}` in 1-based notation.
    #[inline]
    pub fn lagged(&self, i: usize, lag: usize) -> f64 {
        if i >= lag {
            self.values[i - lag]
        } else {
            self.presample
        }
    }
}

impl AsRef<[f64]> for SeriesData {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(SeriesData::new(vec![]).is_err());
        let err = SeriesData::new(vec![1.0, f64::NAN]).unwrap_err();
        assert!(err.to_string().contains("observation 2"));
        assert!(SeriesData::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn presample_is_mean_of_leading_window() {
        let x = SeriesData::new(vec![1.0, 3.0, 5.0, 100.0])
            .unwrap()
            .with_presample_window(3);
        assert_eq!(x.presample(), 3.0);
        assert_eq!(x.lagged(0, 1), 3.0);
        assert_eq!(x.lagged(2, 1), 3.0);
        assert_eq!(x.lagged(3, 2), 3.0);
        assert_eq!(x.lagged(1, 2), 3.0);
        // window longer than the series is clamped
        let y = SeriesData::new(vec![2.0, 4.0])
            .unwrap()
            .with_presample_window(50);
        assert_eq!(y.presample(), 3.0);
    }
}
