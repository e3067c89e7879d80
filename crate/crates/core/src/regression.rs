// SPDX-License-Identifier: MIT OR Apache-2.0

//! Piecewise-level autoregressive regressions and the Schwarz criteria built
//! on them.
//!
//! Every routine works on a window `(start, end]` of the series. Lagged
//! regressors are read from the whole series, so a window that does not start
//! at 0 takes its first lags from the observations just before it; lags that
//! reach before the sample use the series' pre-sample fill.

use serde::{Deserialize, Serialize};

use crate::config::EstimationMode;
use crate::error::{Error, Result};
use crate::lstsq::{self, Matrix};
use crate::series::SeriesData;

/// Design `[L : R]` with response `Y` for a window.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionDesign {
    /// Lag block (first `ar_order` columns) followed by one indicator column
    /// per segment.
    pub matrix: Matrix,
    pub response: Vec<f64>,
    pub ar_order: usize,
    /// Segments `(s, e]` defined by the candidates, in order.
    pub segments: Vec<(usize, usize)>,
}

impl RegressionDesign {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

/// Fitted coefficients of a piecewise-level AR regression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRegression {
    /// AR coefficients.
    pub alpha: Vec<f64>,
    /// Per-segment intercepts.
    pub levels: Vec<f64>,
    pub rss: f64,
    /// `rss / rows`.
    pub sigma2: f64,
    pub ar_order: usize,
    /// A rank-deficient design was solved with a ridge term.
    pub regularized: bool,
}

fn check_window(x: &SeriesData, start: usize, end: usize) -> Result<()> {
    if !(start < end && end <= x.len()) {
        return Err(Error::constraint(format!(
            "window ({start}, {end}] is not inside (0, {}]",
            x.len()
        )));
    }
    Ok(())
}

/// Segments of `(start, end]` cut at `cps`.
pub fn segments(start: usize, end: usize, cps: &[usize]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::with_capacity(cps.len() + 1);
    let mut prev = start;
    for &c in cps.iter().chain(std::iter::once(&end)) {
        if c <= prev {
            return Err(Error::constraint(format!(
                "segment ({prev}, {c}] is empty; candidates must be sorted and inside ({start}, {end})"
            )));
        }
        out.push((prev, c));
        prev = c;
    }
    Ok(out)
}

/// Index of the longest segment, leftmost on ties.
pub fn longest_segment(segs: &[(usize, usize)]) -> usize {
    let mut best = 0;
    for (j, &(s, e)) in segs.iter().enumerate() {
        if e - s > segs[best].1 - segs[best].0 {
            best = j;
        }
    }
    best
}

/// Design over the whole series.
pub fn build_design(x: &SeriesData, cps: &[usize], r: usize) -> Result<RegressionDesign> {
    build_design_window(x, 0, x.len(), cps, r)
}

/// Design over the window `(start, end]` with candidate set `cps`.
pub fn build_design_window(
    x: &SeriesData,
    start: usize,
    end: usize,
    cps: &[usize],
    r: usize,
) -> Result<RegressionDesign> {
    check_window(x, start, end)?;
    let segs = segments(start, end, cps)?;
    let rows = end - start;
    let mut m = Matrix::zeros(rows, r + segs.len());
    for row in 0..rows {
        let i = start + row;
        for k in 1..=r {
            m.set(row, k - 1, x.lagged(i, k));
        }
    }
    for (j, &(s, e)) in segs.iter().enumerate() {
        for i in s..e {
            m.set(i - start, r + j, 1.0);
        }
    }
    Ok(RegressionDesign {
        matrix: m,
        response: x.values()[start..end].to_vec(),
        ar_order: r,
        segments: segs,
    })
}

/// Least-squares fit of `X_{s+1..e}` on `r` lags and an intercept.
pub fn segment_fit(x: &SeriesData, s: usize, e: usize, r: usize) -> Result<SegmentRegression> {
    check_window(x, s, e)?;
    if e - s < r + 2 {
        return Err(Error::constraint(format!(
            "segment ({s}, {e}] has {} observations; AR order {r} needs at least {}",
            e - s,
            r + 2
        )));
    }
    let design = build_design_window(x, s, e, &[], r)?;
    let sol = lstsq::solve(&design.matrix, &design.response);
    Ok(SegmentRegression {
        alpha: sol.coef[..r].to_vec(),
        levels: vec![sol.coef[r]],
        rss: sol.rss,
        sigma2: sol.rss / (e - s) as f64,
        ar_order: r,
        regularized: sol.regularized,
    })
}

/// Lower bound applied to variance estimates before taking logs:
/// `1e-12` times the sample variance of the window, or `1e-300` when that is 0.
pub fn variance_floor(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var > 0.0 {
        1e-12 * var
    } else {
        1e-300
    }
}

fn log_floored(sigma2: f64, window: &[f64]) -> f64 {
    sigma2.max(variance_floor(window)).ln()
}

/// AR order minimising `(e - s)/2 * log(rss_r / (e - s)) + r * xi` over
/// `r = 0..=p_max`; ties go to the smaller order.
pub fn select_ar_order(x: &SeriesData, s: usize, e: usize, p_max: usize, xi: f64) -> Result<usize> {
    check_window(x, s, e)?;
    if e - s < p_max + 2 {
        return Err(Error::constraint(format!(
            "segment ({s}, {e}] has {} observations; p_max = {p_max} needs at least {}",
            e - s,
            p_max + 2
        )));
    }
    let len = (e - s) as f64;
    let window = &x.values()[s..e];
    let mut best = (0usize, f64::INFINITY);
    for r in 0..=p_max {
        let fit = segment_fit(x, s, e, r)?;
        let crit = len / 2.0 * log_floored(fit.rss / len, window) + r as f64 * xi;
        if crit < best.1 {
            best = (r, crit);
        }
    }
    Ok(best.0)
}

/// Coefficients for the whole series under candidate set `cps` and AR order `r`.
pub fn estimate_parameters(
    x: &SeriesData,
    cps: &[usize],
    r: usize,
    mode: EstimationMode,
) -> Result<SegmentRegression> {
    estimate_parameters_window(x, 0, x.len(), cps, r, mode)
}

/// Coefficients on the window `(start, end]`.
///
/// `Global` solves one joint least-squares problem. `Segmentwise` fits every
/// segment separately, keeps each segment's intercept and takes the AR
/// coefficients of the longest segment. The residual sum of squares is always
/// that of the assembled coefficient vector.
pub fn estimate_parameters_window(
    x: &SeriesData,
    start: usize,
    end: usize,
    cps: &[usize],
    r: usize,
    mode: EstimationMode,
) -> Result<SegmentRegression> {
    let design = build_design_window(x, start, end, cps, r)?;
    let rows = design.rows() as f64;
    match mode {
        EstimationMode::Global => {
            let sol = lstsq::solve(&design.matrix, &design.response);
            Ok(SegmentRegression {
                alpha: sol.coef[..r].to_vec(),
                levels: sol.coef[r..].to_vec(),
                rss: sol.rss,
                sigma2: sol.rss / rows,
                ar_order: r,
                regularized: sol.regularized,
            })
        }
        EstimationMode::Segmentwise => {
            let fits = design
                .segments
                .iter()
                .map(|&(s, e)| segment_fit(x, s, e, r))
                .collect::<Result<Vec<_>>>()?;
            let longest = longest_segment(&design.segments);
            let alpha = fits[longest].alpha.clone();
            let levels: Vec<f64> = fits.iter().map(|f| f.levels[0]).collect();
            let coef: Vec<f64> = alpha.iter().chain(&levels).copied().collect();
            let rss = lstsq::residual_ss(&design.matrix, &design.response, &coef);
            Ok(SegmentRegression {
                alpha,
                levels,
                rss,
                sigma2: rss / rows,
                ar_order: r,
                regularized: fits.iter().any(|f| f.regularized),
            })
        }
    }
}

/// Schwarz criterion `n/2 log(sigma2) + (|cps| + r) xi` over the whole series.
pub fn sc(x: &SeriesData, cps: &[usize], r: usize, xi: f64, mode: EstimationMode) -> Result<f64> {
    sc_window(x, 0, x.len(), cps, r, xi, mode).map(|(v, _)| v)
}

/// Schwarz criterion on a window, together with the fit it was computed from.
pub fn sc_window(
    x: &SeriesData,
    start: usize,
    end: usize,
    cps: &[usize],
    r: usize,
    xi: f64,
    mode: EstimationMode,
) -> Result<(f64, SegmentRegression)> {
    let fit = estimate_parameters_window(x, start, end, cps, r, mode)?;
    let value = sc_from_fit(x, start, end, cps.len(), &fit, xi);
    Ok((value, fit))
}

pub(crate) fn sc_from_fit(
    x: &SeriesData,
    start: usize,
    end: usize,
    n_cps: usize,
    fit: &SegmentRegression,
    xi: f64,
) -> f64 {
    let n = (end - start) as f64;
    n / 2.0 * log_floored(fit.sigma2, &x.values()[start..end]) + (n_cps + fit.ar_order) as f64 * xi
}

/// Null-model criterion: AR-filter the series with `alpha`, remove the
/// sample mean, and score `n/2 log(rss / n) + p xi`.
pub fn sc0(x: &SeriesData, alpha: &[f64], xi: f64) -> Result<f64> {
    sc0_window(x, 0, x.len(), alpha, xi)
}

pub fn sc0_window(x: &SeriesData, start: usize, end: usize, alpha: &[f64], xi: f64) -> Result<f64> {
    check_window(x, start, end)?;
    let filtered: Vec<f64> = (start..end)
        .map(|i| {
            x.values()[i]
                - alpha
                    .iter()
                    .enumerate()
                    .map(|(k, a)| a * x.lagged(i, k + 1))
                    .sum::<f64>()
        })
        .collect();
    let n = filtered.len() as f64;
    let mean = filtered.iter().sum::<f64>() / n;
    let rss: f64 = filtered.iter().map(|u| (u - mean) * (u - mean)).sum();
    Ok(n / 2.0 * log_floored(rss / n, &x.values()[start..end]) + alpha.len() as f64 * xi)
}
