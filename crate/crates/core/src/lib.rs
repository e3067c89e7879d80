// SPDX-License-Identifier: MIT OR Apache-2.0

//! Multiple change point detection in the mean of autocorrelated series.
//!
//! The pipeline runs in four steps:
//!
//! 1. [`wbs::wbs2_solution_path`] orders candidate breaks by their maximal
//!    CUSUM over a deterministic grid of sub-intervals.
//! 2. [`sequence::build_sequence`] cuts the sorted log-CUSUMs into a short
//!    sequence of nested candidate models.
//! 3. [`gsc::gsc_select`] walks that sequence backwards and keeps the largest
//!    model whose new breaks beat an AR-filtered null model locally. The AR
//!    order is chosen along the way.
//! 4. [`refine::refine_locations`] optionally re-localises each break.
//!
//! [`detector::detect`] chains these steps. Locations are reported as the
//! 1-based index of the last observation before a change.

#![forbid(unsafe_code)]

pub mod benchmark;
pub mod config;
pub mod detector;
pub mod error;
pub mod gsc;
pub mod io;
pub mod lstsq;
pub mod metrics;
pub mod refine;
pub mod regression;
pub mod sequence;
pub mod series;
pub mod simgen;
pub mod wbs;

pub use config::{ConfigOverrides, DetectorConfig, EstimationMode, GapMethod};
pub use detector::{detect, DetectionResult, Diagnostic};
pub use error::{Error, Result};
pub use series::SeriesData;
pub use simgen::{simulate, SimModel, SimSpec};
