// SPDX-License-Identifier: MIT OR Apache-2.0

//! Replication metrics and their aggregation into a report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hausdorff distance between two sorted location sets.
///
/// When exactly one set is empty the distance is `n`; two empty sets are at
/// distance 0.
pub fn hausdorff(est: &[usize], truth: &[usize], n: usize) -> usize {
    match (est.is_empty(), truth.is_empty()) {
        (true, true) => 0,
        (true, false) | (false, true) => n,
        _ => directed(est, truth).max(directed(truth, est)),
    }
}

// max over `a` of the distance to the nearest element of sorted `b`
fn directed(a: &[usize], b: &[usize]) -> usize {
    a.iter()
        .map(|&v| {
            let i = b.partition_point(|&w| w < v);
            let right = b.get(i).map_or(usize::MAX, |&w| w - v);
            let left = if i > 0 { v - b[i - 1] } else { usize::MAX };
            left.min(right)
        })
        .max()
        .unwrap_or(0)
}

/// Piecewise-constant least-squares fit: segment means between breaks.
pub fn piecewise_mean_fit(x: &[f64], cps: &[usize]) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    let bounds = std::iter::once(0)
        .chain(cps.iter().copied())
        .chain(std::iter::once(n));
    let mut prev = None;
    for b in bounds {
        if let Some(a) = prev {
            if b > a {
                let m = x[a..b].iter().sum::<f64>() / (b - a) as f64;
                out.extend(std::iter::repeat_n(m, b - a));
            }
        }
        prev = Some(b);
    }
    out
}

fn sq_error(fit: &[f64], f: &[f64]) -> f64 {
    fit.iter().zip(f).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Squared error of the fit at `est` relative to the fit at `truth`.
///
/// A zero denominator yields 1 when the numerator is also zero and
/// `+inf` otherwise.
pub fn relative_mse(est: &[usize], truth: &[usize], x: &[f64], f: &[f64]) -> Result<f64> {
    if x.len() != f.len() {
        return Err(Error::invalid(format!(
            "x has {} values but f has {}",
            x.len(),
            f.len()
        )));
    }
    for cps in [est, truth] {
        if cps.windows(2).any(|w| w[0] >= w[1])
            || cps.last().is_some_and(|&c| c >= x.len())
            || cps.first() == Some(&0)
        {
            return Err(Error::invalid(format!(
                "locations {cps:?} must be strictly increasing in 1..n"
            )));
        }
    }
    let num = sq_error(&piecewise_mean_fit(x, est), f);
    let den = sq_error(&piecewise_mean_fit(x, truth), f);
    Ok(if den == 0.0 {
        if num == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    })
}

/// Outcome of one replication.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// Noise-only replication.
    pub null_run: bool,
    pub q_true: usize,
    pub q_hat: usize,
    /// Relative MSE; absent for null runs.
    pub mse: Option<f64>,
    /// Hausdorff distance; absent for null runs.
    pub hausdorff: Option<usize>,
}

/// Aggregated statistics of one model and method.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub model: String,
    pub method: String,
    pub null_runs: usize,
    pub alt_runs: usize,
    /// Proportion of null runs with at least one detection.
    pub size: Option<f64>,
    /// Proportions of `q_hat - q` in bins `<= -2, -1, 0, 1, >= 2`.
    pub histogram: [f64; 5],
    pub mean_mse: Option<f64>,
    pub mean_hausdorff: Option<f64>,
}

fn bin(diff: i64) -> usize {
    (diff.clamp(-2, 2) + 2) as usize
}

/// Aggregates replications. `size` comes from null runs, everything else
/// from alternative runs.
pub fn summarize(model: &str, method: &str, runs: &[RunResult]) -> Result<BenchmarkReport> {
    if runs.is_empty() {
        return Err(Error::invalid("no replications to summarize"));
    }
    let (nulls, alts): (Vec<&RunResult>, Vec<&RunResult>) = runs.iter().partition(|r| r.null_run);
    let mut report = BenchmarkReport {
        model: model.to_string(),
        method: method.to_string(),
        null_runs: nulls.len(),
        alt_runs: alts.len(),
        ..Default::default()
    };
    if !nulls.is_empty() {
        report.size =
            Some(nulls.iter().filter(|r| r.q_hat >= 1).count() as f64 / nulls.len() as f64);
    }
    if !alts.is_empty() {
        let k = alts.len() as f64;
        for r in &alts {
            report.histogram[bin(r.q_hat as i64 - r.q_true as i64)] += 1.0 / k;
        }
        let mse: Vec<f64> = alts.iter().filter_map(|r| r.mse).collect();
        if !mse.is_empty() {
            report.mean_mse = Some(mse.iter().sum::<f64>() / mse.len() as f64);
        }
        let dh: Vec<usize> = alts.iter().filter_map(|r| r.hausdorff).collect();
        if !dh.is_empty() {
            report.mean_hausdorff = Some(dh.iter().sum::<usize>() as f64 / dh.len() as f64);
        }
    }
    Ok(report)
}

fn cell(v: Option<f64>, digits: usize) -> String {
    match v {
        Some(v) => format!("{v:.digits$}"),
        None => "-".to_string(),
    }
}

/// Fixed-width text table, one row per report.
pub fn format_table(reports: &[BenchmarkReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:<6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>8} {:>8}",
        "model", "method", "size", "<=-2", "-1", "0", "1", ">=2", "MSE", "d_H"
    );
    for r in reports {
        let h = r.histogram;
        let _ = writeln!(
            out,
            "{:<6} {:<6} {:>6} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>8} {:>8}",
            r.model,
            r.method,
            cell(r.size, 3),
            h[0],
            h[1],
            h[2],
            h[3],
            h[4],
            cell(r.mean_mse, 3),
            cell(r.mean_hausdorff, 2),
        );
    }
    out
}
