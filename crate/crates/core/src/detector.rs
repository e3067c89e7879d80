// SPDX-License-Identifier: MIT OR Apache-2.0

//! End-to-end detection: solution path, nested models, gSC selection and
//! optional refinement.

use serde::{Deserialize, Serialize};

use crate::config::{DetectorConfig, GapMethod};
use crate::error::Result;
use crate::gsc::{gsc_select, ChangePointModel};
use crate::refine::refine_locations;
use crate::regression::variance_floor;
use crate::sequence::{build_sequence, NestedModelSequence};
use crate::series::SeriesData;
use crate::wbs::{wbs2_solution_path, SolutionPath};

/// Numerical or procedural events worth reporting alongside a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    /// DC was requested but too few path entries were available; LD was used.
    DcFallbackToLd,
    /// The final fit needed the ridge fallback.
    RidgeRegularized,
    /// The residual variance of the final fit hit the lower floor.
    VarianceFloored,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub n: usize,
    pub config: DetectorConfig,
    pub path: SolutionPath,
    pub sequence: NestedModelSequence,
    pub model: ChangePointModel,
    /// Refined locations; `None` when refinement is off.
    pub refined: Option<Vec<usize>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl DetectionResult {
    /// Reported change points: refined when available, else the selected ones.
    pub fn change_points(&self) -> &[usize] {
        self.refined.as_deref().unwrap_or(&self.model.locations)
    }
}

/// Runs the full pipeline on `x` with `cfg`.
pub fn detect(x: &SeriesData, cfg: &DetectorConfig) -> Result<DetectionResult> {
    let n = x.len();
    cfg.validate(n)?;
    let x = x.clone().with_presample_window(cfg.min_spacing);
    let path = wbs2_solution_path(x.values(), cfg);
    let sequence = build_sequence(&path, cfg.gap_method, cfg.max_candidates, cfg.max_models);
    let model = gsc_select(&x, &sequence, cfg)?;
    let refined = if cfg.refine && !model.locations.is_empty() {
        Some(refine_locations(x.values(), &model.locations)?)
    } else if cfg.refine {
        Some(Vec::new())
    } else {
        None
    };

    let mut diagnostics = Vec::new();
    if cfg.gap_method == GapMethod::Dc && sequence.method == GapMethod::Ld {
        diagnostics.push(Diagnostic::DcFallbackToLd);
    }
    if model.regularized {
        diagnostics.push(Diagnostic::RidgeRegularized);
    }
    if model.sigma2 <= variance_floor(x.values()) {
        diagnostics.push(Diagnostic::VarianceFloored);
    }
    Ok(DetectionResult {
        n,
        config: cfg.clone(),
        path,
        sequence,
        model,
        refined,
        diagnostics,
    })
}
