// SPDX-License-Identifier: MIT OR Apache-2.0

//! Single-pass location refinement.
//!
//! Each estimate is re-located by maximising the absolute CUSUM over a window
//! reaching a third of the way towards each neighbouring estimate (or to the
//! series boundary).

use crate::error::{Error, Result};
use crate::wbs::cusum;

/// Refinement windows `(l_j, r_j)` for sorted estimates in `(0, n)`.
///
/// `l_1 = 0`, `r_q = n`, `l_j = floor(2/3 c_{j-1} + 1/3 c_j)` and
/// `r_j = floor(1/3 c_j + 2/3 c_{j+1})`.
pub fn refine_windows(cps: &[usize], n: usize) -> Vec<(usize, usize)> {
    let q = cps.len();
    (0..q)
        .map(|j| {
            let l = if j == 0 {
                0
            } else {
                (2 * cps[j - 1] + cps[j]) / 3
            };
            let r = if j + 1 == q {
                n
            } else {
                (cps[j] + 2 * cps[j + 1]) / 3
            };
            (l, r)
        })
        .collect()
}

/// Refined locations; same length as `cps`.
///
/// A window without interior points keeps its input estimate. If two refined
/// estimates collide or cross, both fall back to their inputs.
pub fn refine_locations(x: &[f64], cps: &[usize]) -> Result<Vec<usize>> {
    let n = x.len();
    if cps.is_empty() {
        return Err(Error::invalid(
            "refine_locations needs at least one change point",
        ));
    }
    if cps.windows(2).any(|w| w[0] >= w[1]) || cps[0] == 0 || cps[cps.len() - 1] >= n {
        return Err(Error::constraint(format!(
            "change points must be strictly increasing inside (0, {n})"
        )));
    }
    let mut out: Vec<usize> = refine_windows(cps, n)
        .into_iter()
        .zip(cps)
        .map(|((l, r), &orig)| best_break(x, l, r).unwrap_or(orig))
        .collect();
    while let Some(j) = out.windows(2).position(|w| w[0] >= w[1]) {
        out[j] = cps[j];
        out[j + 1] = cps[j + 1];
    }
    Ok(out)
}

// argmax over l < b < r of |cusum(x, l, b, r)|, ties to the smallest b
fn best_break(x: &[f64], l: usize, r: usize) -> Option<usize> {
    if r < l + 2 {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for b in (l + 1)..r {
        let v = cusum(x, l, b, r).ok()?.abs();
        if best.is_none_or(|(_, s)| v > s) {
            best = Some((b, v));
        }
    }
    best.map(|(b, _)| b)
}
