// SPDX-License-Identifier: MIT OR Apache-2.0

//! CUSUM statistics and the WBS2 solution path.
//!
//! Segments are half-open: `(s, e]` covers the 0-based slice `x[s..e]`, so a
//! break `b` is the number of observations before the change, which is also
//! the 1-based index of the last observation of the left segment.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::DetectorConfig;
use crate::error::{Error, Result};

/// Work (interval count times mean interval length) above which candidate
/// intervals are scanned in parallel.
const PARALLEL_WORK_THRESHOLD: usize = 1 << 16;

/// One recursion of the path search: interval `(s, e]`, break `b`, `|CUSUM|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathEntry {
    pub s: usize,
    pub b: usize,
    pub e: usize,
    pub stat: f64,
}

/// Path entries sorted by decreasing statistic.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolutionPath {
    pub entries: Vec<PathEntry>,
}

impl SolutionPath {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Breaks in path order.
    pub fn breaks(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.b).collect()
    }

    pub fn stats(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.stat).collect()
    }
}

/// Signed CUSUM contrast of `x[s..b]` against `x[b..e]`.
pub fn cusum(x: &[f64], s: usize, b: usize, e: usize) -> Result<f64> {
    if !(s < b && b < e && e <= x.len()) {
        return Err(Error::constraint(format!(
            "cusum requires 0 <= s < b < e <= n; got s={s}, b={b}, e={e}, n={}",
            x.len()
        )));
    }
    Ok(cusum_unchecked(x, s, b, e))
}

// Sums are taken relative to the first observation of the interval so that a
// constant stretch yields exactly zero. The scan in `max_cusum_on_interval`
// accumulates in the same order, so both routes agree bit for bit.
fn cusum_unchecked(x: &[f64], s: usize, b: usize, e: usize) -> f64 {
    let anchor = x[s];
    let mut left = 0.0;
    for &v in &x[s..b] {
        left += v - anchor;
    }
    let mut total = left;
    for &v in &x[b..e] {
        total += v - anchor;
    }
    contrast(left, total, s, b, e)
}

#[inline]
fn contrast(left: f64, total: f64, s: usize, b: usize, e: usize) -> f64 {
    let nl = (b - s) as f64;
    let nr = (e - b) as f64;
    let weight = (((b - s) * (e - b)) as f64 / (e - s) as f64).sqrt();
    weight * (left / nl - (total - left) / nr)
}

/// Best admissible break in `(l, r]`: maximises `|cusum(x, l, b, r)|` over
/// `b` in `[l + min_spacing, r - min_spacing]`, ties to the smallest `b`.
pub fn max_cusum_on_interval(
    x: &[f64],
    l: usize,
    r: usize,
    min_spacing: usize,
) -> Option<(usize, f64)> {
    let min_spacing = min_spacing.max(1);
    if r > x.len() || l >= r || r - l < 2 * min_spacing {
        return None;
    }
    let (lo, hi) = (l + min_spacing, r - min_spacing);
    let anchor = x[l];
    let mut prefix = Vec::with_capacity(r - l + 1);
    let mut acc = 0.0;
    prefix.push(acc);
    for &v in &x[l..r] {
        acc += v - anchor;
        prefix.push(acc);
    }
    let total = acc;
    let mut best: Option<(usize, f64)> = None;
    for b in lo..=hi {
        let stat = contrast(prefix[b - l], total, l, b, r).abs();
        if best.is_none_or(|(_, s)| stat > s) {
            best = Some((b, stat));
        }
    }
    best
}

/// Number of pairs `s <= l < r <= e` with `r - l > 1`.
fn all_interval_count(s: usize, e: usize) -> usize {
    let len = e - s;
    len * len.saturating_sub(1) / 2
}

/// Candidate intervals for the segment `(s, e]`.
///
/// Small segments return every interval of length at least 2. Otherwise an
/// equispaced grid of `K` points is laid over `[s, e]`, with `K` the smallest
/// integer such that `K (K - 1) / 2 >= intervals`, and every pair of distinct
/// grid points more than one apart is returned. Pairs are ordered by `(l, r)`.
pub fn grid_intervals(s: usize, e: usize, intervals: usize) -> Vec<(usize, usize)> {
    if e <= s + 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if all_interval_count(s, e) <= intervals {
        for l in s..e {
            for r in (l + 2)..=e {
                out.push((l, r));
            }
        }
        return out;
    }
    let k = grid_size(intervals);
    let points = grid_points(s, e, k);
    for (i, &l) in points.iter().enumerate() {
        for &r in &points[i + 1..] {
            if r - l > 1 {
                out.push((l, r));
            }
        }
    }
    out
}

/// Smallest `K` with `K (K - 1) / 2 >= intervals`.
pub fn grid_size(intervals: usize) -> usize {
    let mut k = 2usize;
    while k * (k - 1) / 2 < intervals {
        k += 1;
    }
    k
}

// j -> round((e - s) / (K - 1) * j + s - (e - s) / (K - 1)), j = 1..=K, ties to even.
fn grid_points(s: usize, e: usize, k: usize) -> Vec<usize> {
    let step = (e - s) as f64 / (k - 1) as f64;
    let mut points: Vec<usize> = (1..=k)
        .map(|j| {
            let p = (step * j as f64 + s as f64 - step).round_ties_even();
            (p.max(s as f64) as usize).min(e)
        })
        .collect();
    points.dedup();
    points
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    l: usize,
    b: usize,
    r: usize,
    stat: f64,
}

// Total order used for every arg-max: larger statistic, then smaller b,
// smaller l, smaller r. Returns Greater when `a` should win.
fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    a.stat
        .partial_cmp(&b.stat)
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.b.cmp(&a.b))
        .then_with(|| b.l.cmp(&a.l))
        .then_with(|| b.r.cmp(&a.r))
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if rank(&a, &b) == Ordering::Less { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn best_on_intervals(
    x: &[f64],
    intervals: &[(usize, usize)],
    min_spacing: usize,
    parallel: bool,
) -> Option<Candidate> {
    let eval = |&(l, r): &(usize, usize)| {
        max_cusum_on_interval(x, l, r, min_spacing).map(|(b, stat)| Candidate { l, b, r, stat })
    };
    if parallel {
        intervals.par_iter().map(eval).reduce(|| None, pick)
    } else {
        intervals.iter().map(eval).fold(None, pick)
    }
}

/// Parallelism policy for [`wbs2_solution_path_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Parallel scan for segments with enough work.
    Auto,
}

/// WBS2 solution path using the configured interval count and minimum spacing.
pub fn wbs2_solution_path(x: &[f64], cfg: &DetectorConfig) -> SolutionPath {
    wbs2_solution_path_with(x, cfg.intervals, cfg.min_spacing, Parallelism::Auto)
}

/// WBS2 solution path.
///
/// Each segment `(s, e]` draws candidate intervals with [`grid_intervals`],
/// records the (interval, break) with the largest `|CUSUM|` and recurses on
/// `(s, b]` and `(b, e]`. Segments with `e - s <= 2 * min_spacing` are not
/// split. Zero statistics are dropped and the rest sorted by decreasing
/// statistic, ties by smaller break, then smaller start.
pub fn wbs2_solution_path_with(
    x: &[f64],
    intervals: usize,
    min_spacing: usize,
    parallelism: Parallelism,
) -> SolutionPath {
    let min_spacing = min_spacing.max(1);
    let mut entries = Vec::new();
    let mut stack = vec![(0usize, x.len())];
    while let Some((s, e)) = stack.pop() {
        if e - s <= 2 * min_spacing || e - s <= 1 {
            continue;
        }
        let cands = grid_intervals(s, e, intervals);
        let parallel = parallelism == Parallelism::Auto
            && cands.len() * (e - s) / 3 >= PARALLEL_WORK_THRESHOLD;
        let Some(best) = best_on_intervals(x, &cands, min_spacing, parallel) else {
            continue;
        };
        entries.push(PathEntry {
            s: best.l,
            b: best.b,
            e: best.r,
            stat: best.stat,
        });
        stack.push((best.b, e));
        stack.push((s, best.b));
    }
    entries.retain(|p| p.stat > 0.0);
    entries.sort_by(|a, b| {
        b.stat
            .partial_cmp(&a.stat)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.b.cmp(&b.b))
            .then_with(|| a.s.cmp(&b.s))
    });
    SolutionPath { entries }
}
