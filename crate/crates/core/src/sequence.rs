// SPDX-License-Identifier: MIT OR Apache-2.0

//! Nested candidate models cut out of the sorted log-CUSUMs.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::config::GapMethod;
use crate::error::{Error, Result};
use crate::wbs::SolutionPath;

/// `C_1 ⊂ C_2 ⊂ ... ⊂ C_M'`; the null model `C_0 = ∅` is implicit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NestedModelSequence {
    /// Cut positions (number of leading path entries) in the order produced
    /// by the gap rule: decreasing gap for LD, increasing for DC.
    pub cuts: Vec<usize>,
    /// `models[l - 1]` is `C_l`, sorted by location.
    pub models: Vec<Vec<usize>>,
    /// Number of log-CUSUMs considered, `min(Q, P)`.
    pub q_eff: usize,
    /// Rule that actually produced the cuts.
    pub method: GapMethod,
}

impl NestedModelSequence {
    fn null(q_eff: usize, method: GapMethod) -> Self {
        Self {
            cuts: Vec::new(),
            models: Vec::new(),
            q_eff,
            method,
        }
    }

    /// Number of non-null models.
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    /// `C_l`, with `C_0` the empty set.
    pub fn model(&self, l: usize) -> &[usize] {
        if l == 0 {
            &[]
        } else {
            &self.models[l - 1]
        }
    }

    /// Builds models from cut positions: the model for the `l`-th smallest
    /// cut `G` holds the breaks of the first `G` path entries.
    fn from_cuts(path: &SolutionPath, cuts: Vec<usize>, q_eff: usize, method: GapMethod) -> Self {
        let mut sorted = cuts.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let models = sorted
            .iter()
            .map(|&g| {
                let mut m: Vec<usize> = path.entries[..g].iter().map(|p| p.b).collect();
                m.sort_unstable();
                m
            })
            .collect();
        Self {
            cuts,
            models,
            q_eff,
            method,
        }
    }
}

/// `log(stat)` of the first `min(q, P)` path entries.
pub fn log_cusums(path: &SolutionPath, q: usize) -> Vec<f64> {
    path.entries.iter().take(q).map(|p| p.stat.ln()).collect()
}

/// Largest-difference rule: cuts at the `m` largest consecutive gaps
/// `Y_(g) - Y_(g+1)`, `g < Q_eff`, listed by decreasing gap (ties to the
/// smaller `g`).
pub fn ld_sequence(path: &SolutionPath, q: usize, m: usize) -> NestedModelSequence {
    let y = log_cusums(path, q);
    let q_eff = y.len();
    if q_eff < 2 {
        return NestedModelSequence::null(q_eff, GapMethod::Ld);
    }
    let mut gaps: Vec<(usize, f64)> = y
        .windows(2)
        .enumerate()
        .map(|(i, w)| (i + 1, w[0] - w[1]))
        .collect();
    gaps.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    let cuts: Vec<usize> = gaps.into_iter().take(m).map(|(g, _)| g).collect();
    NestedModelSequence::from_cuts(path, cuts, q_eff, GapMethod::Ld)
}

/// Double CUSUM contrast of `y[i..m]` against `y[m..q]` (0-based slices of
/// the 1-based `Y_(i+1..m)` and `Y_(m+1..Q)`).
pub fn dc_statistic(y: &[f64], i: usize, m: usize, q: usize) -> Result<f64> {
    if !(i < m && m < q && q <= y.len()) {
        return Err(Error::constraint(format!(
            "dc_statistic requires 0 <= i < m < Q <= len; got i={i}, m={m}, Q={q}, len={}",
            y.len()
        )));
    }
    Ok(dc_unchecked(y, i, m, q))
}

fn dc_unchecked(y: &[f64], i: usize, m: usize, q: usize) -> f64 {
    let left = y[i..m].iter().sum::<f64>() / (m - i) as f64;
    let right = y[m..q].iter().sum::<f64>() / (q - m) as f64;
    (((m - i) * (q - m)) as f64 / (q - i) as f64).sqrt() * (left - right)
}

/// Double CUSUM rule: `g_0 = 0`, `g_{l+1} = argmax_{g_l < m < Q_eff}` of the
/// contrast started at `g_l`, for at most `m_max` steps. Falls back to the LD
/// rule when fewer than three log-CUSUMs are available.
pub fn dc_sequence(path: &SolutionPath, q: usize, m_max: usize) -> NestedModelSequence {
    let y = log_cusums(path, q);
    let q_eff = y.len();
    if q_eff <= 2 {
        return ld_sequence(path, q, m_max);
    }
    let mut cuts = Vec::new();
    let mut g = 0usize;
    while cuts.len() < m_max && g + 1 < q_eff {
        let mut best = (g + 1, f64::NEG_INFINITY);
        for m in (g + 1)..q_eff {
            let v = dc_unchecked(&y, g, m, q_eff);
            if v > best.1 {
                best = (m, v);
            }
        }
        g = best.0;
        cuts.push(g);
    }
    NestedModelSequence::from_cuts(path, cuts, q_eff, GapMethod::Dc)
}

/// Sequence for the configured gap rule.
pub fn build_sequence(
    path: &SolutionPath,
    method: GapMethod,
    q: usize,
    m: usize,
) -> NestedModelSequence {
    match method {
        GapMethod::Ld => ld_sequence(path, q, m),
        GapMethod::Dc => dc_sequence(path, q, m),
    }
}
