// SPDX-License-Identifier: MIT OR Apache-2.0

//! Tuning parameters and their data-length dependent defaults.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_INTERVALS: usize = 100;
pub const DEFAULT_MAX_MODELS: usize = 5;
pub const DEFAULT_MAX_AR_ORDER: usize = 10;
pub const DEFAULT_PENALTY_EXPONENT: f64 = 1.01;
pub const CANDIDATE_BOUND_EXPONENT: f64 = 1.9;
pub const MIN_SPACING_FLOOR: usize = 20;

/// How the nested model sequence is cut out of the sorted log-CUSUMs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapMethod {
    /// Largest consecutive differences.
    #[default]
    Ld,
    /// Iterated double CUSUM.
    Dc,
}

impl fmt::Display for GapMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ld => "LD",
            Self::Dc => "DC",
        })
    }
}

impl FromStr for GapMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ld" => Ok(Self::Ld),
            "dc" => Ok(Self::Dc),
            _ => Err(Error::invalid(format!(
                "unknown gap method '{s}'; expected ld or dc"
            ))),
        }
    }
}

/// Estimator for the regression coefficients behind the Schwarz criterion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimationMode {
    /// One joint least-squares fit of the response on lags and segment dummies.
    #[default]
    Global,
    /// Levels fitted per segment, AR coefficients taken from the longest segment.
    Segmentwise,
}

impl FromStr for EstimationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(Self::Global),
            "segmentwise" => Ok(Self::Segmentwise),
            _ => Err(Error::invalid(format!(
                "unknown estimation mode '{s}'; expected global or segmentwise"
            ))),
        }
    }
}

/// Fully resolved detector configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Intervals drawn per recursion of the solution path search.
    #[serde(rename = "R_n")]
    pub intervals: usize,
    /// Upper bound on the number of log-CUSUMs used to build model candidates.
    #[serde(rename = "Q")]
    pub max_candidates: usize,
    /// Maximum number of nested non-null models.
    #[serde(rename = "M")]
    pub max_models: usize,
    #[serde(rename = "p_max")]
    pub max_ar_order: usize,
    pub min_spacing: usize,
    /// Schwarz criterion penalty per parameter.
    pub xi: f64,
    pub gap_method: GapMethod,
    pub refine: bool,
    pub estimation: EstimationMode,
}

impl DetectorConfig {
    /// Defaults for a series of length `n`.
    pub fn for_length(n: usize) -> Self {
        ConfigOverrides::default().resolve(n)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.intervals == 0 {
            return Err(Error::constraint("R_n must be >= 1"));
        }
        if self.max_candidates < 2 {
            return Err(Error::constraint(format!(
                "Q must be >= 2; got {}",
                self.max_candidates
            )));
        }
        if self.max_models == 0 {
            return Err(Error::constraint("M must be >= 1"));
        }
        if self.min_spacing == 0 {
            return Err(Error::constraint("min_spacing must be >= 1"));
        }
        if self.min_spacing < self.max_ar_order + 1 {
            return Err(Error::constraint(format!(
                "min_spacing ({}) must be >= p_max + 1 ({})",
                self.min_spacing,
                self.max_ar_order + 1
            )));
        }
        if !(self.xi.is_finite() && self.xi > 0.0) {
            return Err(Error::constraint(format!(
                "penalty must be finite and > 0; got {}",
                self.xi
            )));
        }
        if n < 2 * self.min_spacing {
            return Err(Error::constraint(format!(
                "series length n = {n} is below 2 * min_spacing = {}",
                2 * self.min_spacing
            )));
        }
        Ok(())
    }
}

/// `floor(log(n)^1.9)`, at least 2.
pub fn default_max_candidates(n: usize) -> usize {
    let ln = (n.max(2) as f64).ln();
    (ln.powf(CANDIDATE_BOUND_EXPONENT).floor() as usize).max(2)
}

/// `max(20, p_max + ceil(log(n)))`.
pub fn default_min_spacing(n: usize, max_ar_order: usize) -> usize {
    let ln = (n.max(1) as f64).ln().ceil() as usize;
    MIN_SPACING_FLOOR.max(max_ar_order + ln)
}

/// `log(n)^exponent`.
pub fn penalty(n: usize, exponent: f64) -> f64 {
    (n.max(2) as f64).ln().powf(exponent)
}

/// Optional user settings; unset fields take their length-dependent defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub intervals: Option<usize>,
    pub max_candidates: Option<usize>,
    pub max_models: Option<usize>,
    pub max_ar_order: Option<usize>,
    pub min_spacing: Option<usize>,
    pub penalty_exponent: Option<f64>,
    pub gap_method: Option<GapMethod>,
    pub refine: Option<bool>,
    pub estimation: Option<EstimationMode>,
}

impl ConfigOverrides {
    pub fn resolve(&self, n: usize) -> DetectorConfig {
        let max_ar_order = self.max_ar_order.unwrap_or(DEFAULT_MAX_AR_ORDER);
        DetectorConfig {
            intervals: self.intervals.unwrap_or(DEFAULT_INTERVALS),
            max_candidates: self
                .max_candidates
                .unwrap_or_else(|| default_max_candidates(n)),
            max_models: self.max_models.unwrap_or(DEFAULT_MAX_MODELS),
            max_ar_order,
            min_spacing: self
                .min_spacing
                .unwrap_or_else(|| default_min_spacing(n, max_ar_order)),
            xi: penalty(n, self.penalty_exponent.unwrap_or(DEFAULT_PENALTY_EXPONENT)),
            gap_method: self.gap_method.unwrap_or_default(),
            refine: self.refine.unwrap_or(true),
            estimation: self.estimation.unwrap_or_default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_at_n_1000() {
        let cfg = DetectorConfig::for_length(1000);
        assert_eq!(cfg.intervals, 100);
        // ln(1000)^1.9 = 39.33...
        assert_eq!(cfg.max_candidates, 39);
        assert_eq!(cfg.max_models, 5);
        assert_eq!(cfg.max_ar_order, 10);
        // max(20, 10 + ceil(6.9078)) = 20
        assert_eq!(cfg.min_spacing, 20);
        assert!((cfg.xi - 1000f64.ln().powf(1.01)).abs() < 1e-15);
        assert_eq!(cfg.gap_method, GapMethod::Ld);
        assert_eq!(cfg.estimation, EstimationMode::Global);
        assert!(cfg.validate(1000).is_ok());
    }

    #[test]
    fn min_spacing_tracks_pmax() {
        assert_eq!(default_min_spacing(150, 5), 20);
        assert_eq!(default_min_spacing(1000, 15), 22);
        let cfg = ConfigOverrides {
            max_ar_order: Some(15),
            ..Default::default()
        }
        .resolve(1000);
        assert_eq!(cfg.min_spacing, 22);
    }

    #[test]
    fn validation_names_the_constraint() {
        let cfg = DetectorConfig::for_length(30);
        let err = cfg.validate(30).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("2 * min_spacing"));
        let mut bad = DetectorConfig::for_length(1000);
        bad.min_spacing = 5;
        assert!(bad
            .validate(1000)
            .unwrap_err()
            .to_string()
            .contains("p_max + 1"));
        bad = DetectorConfig::for_length(1000);
        bad.max_candidates = 1;
        assert!(bad.validate(1000).is_err());
    }

    #[test]
    fn parses_enums() {
        assert_eq!("DC".parse::<GapMethod>().unwrap(), GapMethod::Dc);
        assert_eq!(
            "segmentwise".parse::<EstimationMode>().unwrap(),
            EstimationMode::Segmentwise
        );
        assert!("foo".parse::<GapMethod>().is_err());
    }
}
