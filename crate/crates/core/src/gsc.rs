// SPDX-License-Identifier: MIT OR Apache-2.0

//! Backward model selection along a nested model sequence.
//!
//! Starting from the largest model, each step compares, on every stretch
//! between consecutive members of the next smaller model that gained new
//! candidates, the Schwarz criterion of the local change point model against
//! the criterion of the AR-filtered constant-mean model. The first model whose
//! new candidates all win is returned; otherwise the walk ends at the null model.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::DetectorConfig;
use crate::error::Result;
use crate::regression::{
    estimate_parameters, estimate_parameters_window, longest_segment, sc0_window, sc_from_fit,
    segments, select_ar_order, SegmentRegression,
};
use crate::sequence::NestedModelSequence;
use crate::series::SeriesData;

/// One local comparison of the backward walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalComparison {
    /// Stretch `(start, end]` between consecutive members of the smaller model.
    pub start: usize,
    pub end: usize,
    /// Candidates of the larger model inside the stretch.
    pub added: Vec<usize>,
    pub p_hat: usize,
    pub sc: f64,
    pub sc0: f64,
    /// `sc < sc0`.
    pub accepted: bool,
}

/// All comparisons made for model index `level`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GscStep {
    pub level: usize,
    pub comparisons: Vec<LocalComparison>,
}

/// Selected change point model with its full-series refit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChangePointModel {
    /// Sorted change points (last observation before each change, 1-based).
    pub locations: Vec<usize>,
    /// Index of the selected model in the sequence; 0 for the null model.
    pub level: usize,
    pub p_hat: usize,
    pub alpha: Vec<f64>,
    /// Per-segment regression intercepts.
    pub levels: Vec<f64>,
    pub sigma2: f64,
    /// Schwarz criterion of the refit over the whole series.
    pub criterion_value: f64,
    pub regularized: bool,
    pub trace: Vec<GscStep>,
}

// AR orders that every segment of `segs` can support.
fn order_cap(p_max: usize, segs: &[(usize, usize)]) -> usize {
    let shortest = segs.iter().map(|&(s, e)| e - s).min().unwrap_or(0);
    p_max.min(shortest.saturating_sub(2))
}

fn compare_locally(
    x: &SeriesData,
    start: usize,
    end: usize,
    added: Vec<usize>,
    cfg: &DetectorConfig,
) -> Result<LocalComparison> {
    let segs = segments(start, end, &added)?;
    let (ls, le) = segs[longest_segment(&segs)];
    let p_hat = select_ar_order(x, ls, le, order_cap(cfg.max_ar_order, &segs), cfg.xi)?;
    let fit = estimate_parameters_window(x, start, end, &added, p_hat, cfg.estimation)?;
    let sc = sc_from_fit(x, start, end, added.len(), &fit, cfg.xi);
    let sc0 = sc0_window(x, start, end, &fit.alpha, cfg.xi)?;
    Ok(LocalComparison {
        start,
        end,
        added,
        p_hat,
        sc,
        sc0,
        accepted: sc < sc0,
    })
}

fn comparisons_at(
    x: &SeriesData,
    seq: &NestedModelSequence,
    level: usize,
    cfg: &DetectorConfig,
) -> Result<Vec<LocalComparison>> {
    let n = x.len();
    let smaller = seq.model(level - 1);
    let larger = seq.model(level);
    let bounds: Vec<usize> = std::iter::once(0)
        .chain(smaller.iter().copied())
        .chain(std::iter::once(n))
        .collect();
    let stretches: Vec<(usize, usize, Vec<usize>)> = bounds
        .windows(2)
        .filter_map(|w| {
            let added: Vec<usize> = larger
                .iter()
                .copied()
                .filter(|&c| w[0] < c && c < w[1])
                .collect();
            (!added.is_empty()).then(|| (w[0], w[1], added))
        })
        .collect();
    stretches
        .into_par_iter()
        .map(|(s, e, added)| compare_locally(x, s, e, added, cfg))
        .collect()
}

/// Refit on the whole series: AR order chosen on the longest segment, then
/// coefficients by the configured estimator.
pub fn fit_model(
    x: &SeriesData,
    locations: &[usize],
    cfg: &DetectorConfig,
) -> Result<(usize, SegmentRegression, f64)> {
    let segs = segments(0, x.len(), locations)?;
    let (ls, le) = segs[longest_segment(&segs)];
    let p_hat = select_ar_order(x, ls, le, order_cap(cfg.max_ar_order, &segs), cfg.xi)?;
    let fit = estimate_parameters(x, locations, p_hat, cfg.estimation)?;
    let crit = sc_from_fit(x, 0, x.len(), locations.len(), &fit, cfg.xi);
    Ok((p_hat, fit, crit))
}

fn finish(
    x: &SeriesData,
    locations: Vec<usize>,
    level: usize,
    trace: Vec<GscStep>,
    cfg: &DetectorConfig,
) -> Result<ChangePointModel> {
    let (p_hat, fit, criterion_value) = fit_model(x, &locations, cfg)?;
    Ok(ChangePointModel {
        locations,
        level,
        p_hat,
        alpha: fit.alpha,
        levels: fit.levels,
        sigma2: fit.sigma2,
        criterion_value,
        regularized: fit.regularized,
        trace,
    })
}

/// Runs the backward walk over `seq` and refits the selected model.
pub fn gsc_select(
    x: &SeriesData,
    seq: &NestedModelSequence,
    cfg: &DetectorConfig,
) -> Result<ChangePointModel> {
    let mut trace = Vec::new();
    let mut level = seq.len();
    while level >= 1 {
        let comparisons = comparisons_at(x, seq, level, cfg)?;
        let all_accepted = comparisons.iter().all(|c| c.accepted);
        trace.push(GscStep { level, comparisons });
        if all_accepted {
            return finish(x, seq.model(level).to_vec(), level, trace, cfg);
        }
        // C_0 is empty, so level 1 is a single comparison over (0, n]: a
        // rejection there leaves only the null model.
        level -= 1;
    }
    finish(x, Vec::new(), 0, trace, cfg)
}
