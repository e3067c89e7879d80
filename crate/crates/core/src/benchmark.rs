// SPDX-License-Identifier: MIT OR Apache-2.0

//! Monte Carlo benchmark over the simulation models.
//!
//! Replication `r` of a model uses RNG stream `2r` for the alternative and
//! `2r + 1` for the null variant, so results do not depend on scheduling or
//! on the number of threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ConfigOverrides, GapMethod};
use crate::detector::detect;
use crate::error::Result;
use crate::metrics::{hausdorff, relative_mse, summarize, BenchmarkReport, RunResult};
use crate::simgen::{simulate, SimModel, SimSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkOptions {
    pub models: Vec<SimModel>,
    pub reps: usize,
    pub seed: u64,
    pub methods: Vec<GapMethod>,
    /// Applied on top of each model's defaults.
    pub overrides: ConfigOverrides,
}

impl BenchmarkOptions {
    pub fn new(models: Vec<SimModel>, reps: usize, seed: u64) -> Self {
        Self {
            models,
            reps,
            seed,
            methods: vec![GapMethod::Ld],
            overrides: ConfigOverrides::default(),
        }
    }
}

/// Estimated locations of one replication, for density plots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotRecord {
    pub model: SimModel,
    pub method: GapMethod,
    pub rep: usize,
    pub truth: Vec<usize>,
    pub locations: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkOutcome {
    pub reports: Vec<BenchmarkReport>,
    pub plot: Vec<PlotRecord>,
}

struct Replication {
    alt: Vec<(RunResult, Vec<usize>)>,
    null: Vec<RunResult>,
}

fn run_replication(model: SimModel, rep: usize, opts: &BenchmarkOptions) -> Result<Replication> {
    let base = SimSpec::new(model, opts.seed);
    let n = base.n;
    let alt_data = simulate(&base.clone().stream(2 * rep as u64))?;
    let null_data = simulate(&base.null(true).stream(2 * rep as u64 + 1))?;
    let mut overrides = opts.overrides.clone();
    if overrides.max_ar_order.is_none() {
        overrides.max_ar_order = model.recommended_max_ar_order();
    }

    let mut alt = Vec::new();
    let mut null = Vec::new();
    for &method in &opts.methods {
        let cfg = ConfigOverrides {
            gap_method: Some(method),
            ..overrides.clone()
        }
        .resolve(n);
        let est = detect(&alt_data.x, &cfg)?;
        let cps = est.change_points().to_vec();
        let q_true = alt_data.truth.len();
        alt.push((
            RunResult {
                null_run: false,
                q_true,
                q_hat: cps.len(),
                mse: Some(relative_mse(
                    &cps,
                    &alt_data.truth,
                    alt_data.x.values(),
                    &alt_data.f,
                )?),
                hausdorff: Some(hausdorff(&cps, &alt_data.truth, n)),
            },
            cps,
        ));
        let est0 = detect(&null_data.x, &cfg)?;
        null.push(RunResult {
            null_run: true,
            q_true: 0,
            q_hat: est0.change_points().len(),
            mse: None,
            hausdorff: None,
        });
    }
    Ok(Replication { alt, null })
}

/// Runs every model and method; one report per (model, method) pair, in
/// input order.
pub fn run_benchmark(opts: &BenchmarkOptions) -> Result<BenchmarkOutcome> {
    let mut outcome = BenchmarkOutcome::default();
    for &model in &opts.models {
        let reps: Vec<Replication> = (0..opts.reps)
            .into_par_iter()
            .map(|r| run_replication(model, r, opts))
            .collect::<Result<_>>()?;
        let truth = model.change_points(model.default_length());
        for (k, &method) in opts.methods.iter().enumerate() {
            let mut runs = Vec::with_capacity(2 * reps.len());
            for (r, rep) in reps.iter().enumerate() {
                let (run, locations) = &rep.alt[k];
                runs.push(run.clone());
                runs.push(rep.null[k].clone());
                outcome.plot.push(PlotRecord {
                    model,
                    method,
                    rep: r,
                    truth: truth.clone(),
                    locations: locations.clone(),
                });
            }
            if !runs.is_empty() {
                outcome
                    .reports
                    .push(summarize(&model.to_string(), &method.to_string(), &runs)?);
            }
        }
    }
    Ok(outcome)
}
