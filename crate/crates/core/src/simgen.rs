// SPDX-License-Identifier: MIT OR Apache-2.0

//! Benchmark data generators: piecewise-constant signals plus ARMA or
//! time-varying AR noise.
//!
//! Randomness comes from ChaCha20 seeded with `seed`, with the replication
//! index selecting the stream, so any replication can be regenerated on its
//! own. Within a stream the model's random parameters are drawn first (segment
//! levels, then ARMA coefficients), followed by the Gaussian innovations of
//! the burn-in and the sample.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::SeriesData;

/// Samples simulated and discarded before the returned noise.
pub const BURN_IN: usize = 500;

/// Simulation models M1 to M13.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimModel {
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    M7,
    M8,
    M9,
    M10,
    M11,
    M12,
    M13,
}

impl SimModel {
    pub const ALL: [SimModel; 13] = [
        Self::M1,
        Self::M2,
        Self::M3,
        Self::M4,
        Self::M5,
        Self::M6,
        Self::M7,
        Self::M8,
        Self::M9,
        Self::M10,
        Self::M11,
        Self::M12,
        Self::M13,
    ];

    pub fn default_length(self) -> usize {
        match self {
            Self::M2 => 200,
            Self::M3 => 150,
            Self::M4 => 300,
            Self::M9 | Self::M10 => 2000,
            Self::M11 => 1650,
            _ => 1000,
        }
    }

    /// Maximum AR order used for this model in the benchmark (shorter for M3).
    pub fn recommended_max_ar_order(self) -> Option<usize> {
        match self {
            Self::M3 => Some(5),
            _ => None,
        }
    }

    /// True change points for a series of length `n`.
    pub fn change_points(self, n: usize) -> Vec<usize> {
        match self {
            Self::M1 | Self::M5 | Self::M6 | Self::M7 | Self::M8 | Self::M12 | Self::M13 => {
                vec![100, 300, 500, 550, 750]
            }
            Self::M2 => vec![75, 125],
            Self::M3 => vec![50, 100],
            Self::M4 => vec![100, 200],
            Self::M9 | Self::M10 => (1..=15).map(|j| (n * j).div_ceil(16)).collect(),
            Self::M11 => (1..=10).map(|j| 150 * j).collect(),
        }
    }

    /// Jump sizes at the change points, for models with fixed levels.
    fn jumps(self) -> Option<Vec<f64>> {
        match self {
            Self::M1 | Self::M5 | Self::M6 | Self::M12 | Self::M13 => {
                Some(vec![1.0, -1.0, 2.0, -2.0, -1.0])
            }
            Self::M2 | Self::M3 => Some(vec![2.5, -2.5]),
            Self::M4 => Some(vec![1.0, -1.0]),
            Self::M7 => Some(vec![3.0, -3.0, 4.0, -4.0, -3.0]),
            Self::M8 => Some(vec![5.0, -3.0, 6.0, -7.0, -3.0]),
            Self::M11 => Some(vec![7.0, -7.0, 6.0, -6.0, 5.0, -5.0, 4.0, -4.0, 3.0, -3.0]),
            Self::M9 | Self::M10 => None,
        }
    }
}

impl fmt::Display for SimModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for SimModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let idx: Option<usize> = s
            .strip_prefix(['M', 'm'])
            .and_then(|d| d.parse().ok())
            .filter(|&i| (1..=13).contains(&i));
        idx.map(|i| Self::ALL[i - 1])
            .ok_or_else(|| Error::invalid(format!("unknown model '{s}'; expected M1..M13")))
    }
}

/// What to simulate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub model: SimModel,
    pub n: usize,
    /// Zero signal (noise only).
    pub null_variant: bool,
    pub seed: u64,
    /// Replication index; selects the RNG stream.
    pub stream: u64,
}

impl SimSpec {
    pub fn new(model: SimModel, seed: u64) -> Self {
        Self {
            model,
            n: model.default_length(),
            null_variant: false,
            seed,
            stream: 0,
        }
    }

    pub fn with_length(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn null(mut self, null_variant: bool) -> Self {
        self.null_variant = null_variant;
        self
    }

    pub fn stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    fn validate(&self) -> Result<()> {
        let last = *self.model.change_points(self.n).last().unwrap_or(&0);
        if self.n <= last {
            return Err(Error::invalid(format!(
                "{}: n = {} must exceed the last change point {last}",
                self.model, self.n
            )));
        }
        Ok(())
    }
}

/// Realised random parameters and noise law of one simulation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimMeta {
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub sigma_eps: f64,
    /// Segment levels `f_{θ_j + 1}`, j = 0..=q.
    pub levels: Vec<f64>,
    pub time_varying: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimOutput {
    pub x: SeriesData,
    pub f: Vec<f64>,
    /// True change points; empty for the null variant.
    pub truth: Vec<usize>,
    pub meta: SimMeta,
}

fn levels_for(model: SimModel, rng: &mut ChaCha20Rng) -> Vec<f64> {
    match model.jumps() {
        Some(j) => std::iter::once(0.0)
            .chain(j.iter().scan(0.0, |acc, d| {
                *acc += d;
                Some(*acc)
            }))
            .collect(),
        None => (0..=15)
            .map(|j| {
                let u: f64 = rng.random_range(1.0..2.0);
                if j % 2 == 0 {
                    u
                } else {
                    -u
                }
            })
            .collect(),
    }
}

fn piecewise(n: usize, cps: &[usize], levels: &[f64]) -> Vec<f64> {
    let mut f = Vec::with_capacity(n);
    let mut seg = 0;
    for t in 0..n {
        while seg < cps.len() && t >= cps[seg] {
            seg += 1;
        }
        f.push(levels[seg]);
    }
    f
}

/// Piecewise-constant signal `f_t` for `spec`; zeros for the null variant.
pub fn build_signal(spec: &SimSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = spec.rng();
    let levels = levels_for(spec.model, &mut rng);
    if spec.null_variant {
        return Ok(vec![0.0; spec.n]);
    }
    Ok(piecewise(
        spec.n,
        &spec.model.change_points(spec.n),
        &levels,
    ))
}

/// True when `1 - a_1 z - ... - a_p z^p` has all roots outside the unit circle.
pub fn is_stationary(ar: &[f64]) -> bool {
    // step-down recursion to partial autocorrelations
    let mut a = ar.to_vec();
    while let Some(&k) = a.last() {
        if k.is_nan() || k.abs() >= 1.0 {
            return false;
        }
        let p = a.len();
        let denom = 1.0 - k * k;
        a = (0..p - 1)
            .map(|i| (a[i] + k * a[p - 2 - i]) / denom)
            .collect();
    }
    true
}

/// ARMA noise `Z_t = sum a_i Z_{t-i} + e_t + sum b_j e_{t-j}` with
/// `e_t ~ N(0, sigma^2)`, after a burn-in of [`BURN_IN`] samples.
pub fn arma_noise<R: Rng + ?Sized>(
    ar: &[f64],
    ma: &[f64],
    sigma: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !is_stationary(ar) {
        return Err(Error::constraint(format!(
            "AR coefficients {ar:?} are not stationary"
        )));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::invalid(format!(
            "innovation sd must be finite and >= 0; got {sigma}"
        )));
    }
    let total = n + BURN_IN;
    let eps: Vec<f64> = (0..total)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut z = vec![0.0; total];
    for t in 0..total {
        let mut v = eps[t];
        for (j, b) in ma.iter().enumerate() {
            if t > j {
                v += b * eps[t - j - 1];
            }
        }
        for (i, a) in ar.iter().enumerate() {
            if t > i {
                v += a * z[t - i - 1];
            }
        }
        z[t] = v;
    }
    Ok(z.split_off(BURN_IN))
}

/// Time-varying AR(1) noise `Z_t = a(t) Z_{t-1} + sqrt(1 - a(t)^2) e_t`,
/// `t = 1..=n`, started at zero and burnt in with `a(1)`.
pub fn tvar1_noise<R: Rng + ?Sized>(
    coef: impl Fn(usize) -> f64,
    n: usize,
    rng: &mut R,
) -> Vec<f64> {
    let mut z = 0.0;
    let mut out = Vec::with_capacity(n);
    for step in 0..(n + BURN_IN) {
        let t = if step < BURN_IN {
            1
        } else {
            step - BURN_IN + 1
        };
        let a = coef(t);
        let e: f64 = rng.sample(StandardNormal);
        z = a * z + (1.0 - a * a).sqrt() * e;
        if step >= BURN_IN {
            out.push(z);
        }
    }
    out
}

/// AR(1) coefficient of M12 at time `t` (1-based).
pub fn m12_coefficient(t: usize, n: usize) -> f64 {
    0.5 - 0.2 * (2.0 * PI * t as f64 / n as f64).cos()
}

/// AR(1) coefficient of M13 at time `t` (1-based): piecewise constant,
/// changing with the mean.
pub fn m13_coefficient(t: usize) -> f64 {
    const BREAKS: [usize; 5] = [100, 300, 500, 550, 750];
    const COEF: [f64; 6] = [0.3, 0.4, 0.6, 0.7, 0.5, 0.3];
    COEF[BREAKS.iter().filter(|&&b| t > b).count()]
}

const M8_AR: [f64; 2] = [0.75, -0.5];
const M8_MA: [f64; 6] = [0.8, 0.7, 0.6, 0.5, 0.4, 0.3];

/// Simulates `x = f + Z` for `spec`.
pub fn simulate(spec: &SimSpec) -> Result<SimOutput> {
    spec.validate()?;
    let n = spec.n;
    let model = spec.model;
    let mut rng = spec.rng();
    let levels = levels_for(model, &mut rng);

    let (ar, ma, sigma): (Vec<f64>, Vec<f64>, f64) = match model {
        SimModel::M1 => (vec![], vec![], 1.0),
        SimModel::M2 => (vec![0.5], vec![0.3], 1.0 / 2.14285),
        SimModel::M3 | SimModel::M9 => (vec![0.5], vec![], (1.0f64 - 0.25).sqrt()),
        SimModel::M10 => (vec![0.9], vec![], (1.0f64 - 0.81).sqrt()),
        SimModel::M4 => {
            let a: f64 = rng.random_range(-0.9..0.9);
            let b: f64 = rng.random_range(-0.9..0.9);
            (
                vec![a],
                vec![b],
                ((1.0 - a * a) / (1.0 + a * b + b * b)).sqrt(),
            )
        }
        SimModel::M5 => (vec![], vec![0.3], 1.0),
        SimModel::M6 => (vec![], vec![-0.9], 1.0),
        SimModel::M7 => (vec![], vec![0.9, 0.8, 0.7, 0.6], 1.0),
        SimModel::M8 | SimModel::M11 => (M8_AR.to_vec(), M8_MA.to_vec(), 1.0),
        SimModel::M12 | SimModel::M13 => (vec![], vec![], 1.0),
    };
    let time_varying = matches!(model, SimModel::M12 | SimModel::M13);
    let z = match model {
        SimModel::M12 => tvar1_noise(|t| m12_coefficient(t, n), n, &mut rng),
        SimModel::M13 => tvar1_noise(m13_coefficient, n, &mut rng),
        _ => arma_noise(&ar, &ma, sigma, n, &mut rng)?,
    };

    let truth = if spec.null_variant {
        Vec::new()
    } else {
        model.change_points(n)
    };
    let f = if spec.null_variant {
        vec![0.0; n]
    } else {
        piecewise(n, &truth, &levels)
    };
    let x: Vec<f64> = f.iter().zip(&z).map(|(f, z)| f + z).collect();
    Ok(SimOutput {
        x: SeriesData::new(x)?,
        f,
        truth,
        meta: SimMeta {
            ar,
            ma,
            sigma_eps: sigma,
            levels,
            time_varying,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    fn mean_var(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        (m, v.iter().map(|t| (t - m).powi(2)).sum::<f64>() / n)
    }

    fn lag1_acf(v: &[f64]) -> f64 {
        let (m, var) = mean_var(v);
        let c: f64 = v.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum::<f64>() / v.len() as f64;
        c / var
    }

    #[test]
    fn m1_signal_matches_layout() {
        let f = build_signal(&SimSpec::new(SimModel::M1, 1)).unwrap();
        assert_eq!(f.len(), 1000);
        assert_eq!(f[99], 0.0);
        assert_eq!(f[100], 1.0);
        assert_eq!(f[300], 0.0);
        assert_eq!(f[500], 2.0);
        assert_eq!(f[550], 0.0);
        assert_eq!(f[750], -1.0);
        assert_eq!(f[999], -1.0);
        assert!(build_signal(&SimSpec::new(SimModel::M1, 1).null(true))
            .unwrap()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn m9_layout_and_level_signs() {
        let spec = SimSpec::new(SimModel::M9, 7);
        let cps = SimModel::M9.change_points(2000);
        assert_eq!(cps.len(), 15);
        assert_eq!(cps[0], 125);
        assert_eq!(
            cps,
            (1..=15usize)
                .map(|j| (2000 * j).div_ceil(16))
                .collect::<Vec<_>>()
        );
        let out = simulate(&spec).unwrap();
        assert_eq!(out.truth, cps);
        for (j, l) in out.meta.levels.iter().enumerate() {
            let u = if j % 2 == 0 { *l } else { -*l };
            assert!((1.0..2.0).contains(&u));
        }
        assert_eq!(build_signal(&spec).unwrap(), out.f);
    }

    #[test]
    fn white_noise_has_unit_variance() {
        let z = arma_noise(&[], &[], 1.0, 10_000, &mut rng(1)).unwrap();
        let (_, var) = mean_var(&z);
        assert!((var - 1.0).abs() < 0.1);
    }

    #[test]
    fn ar1_marginal_variance_is_one() {
        let z = arma_noise(&[0.5], &[], (1.0f64 - 0.25).sqrt(), 10_000, &mut rng(2)).unwrap();
        let (_, var) = mean_var(&z);
        assert!((var - 1.0).abs() < 0.1, "var {var}");
    }

    #[test]
    fn zero_sigma_is_zero_noise() {
        assert!(arma_noise(&[0.5], &[0.3], 0.0, 50, &mut rng(3))
            .unwrap()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn explosive_ar_is_rejected() {
        assert!(arma_noise(&[1.2], &[], 1.0, 10, &mut rng(4)).is_err());
        assert!(arma_noise(&[0.5, 0.6], &[], 1.0, 10, &mut rng(4)).is_err());
        assert!(is_stationary(&M8_AR));
        assert!(is_stationary(&[]));
        assert!(!is_stationary(&[1.0]));
    }

    #[test]
    fn m6_lag1_autocorrelation() {
        let spec = SimSpec::new(SimModel::M6, 5).with_length(10_000).null(true);
        let out = simulate(&spec).unwrap();
        let r1 = lag1_acf(out.x.values());
        assert!((r1 - (-0.9 / 1.81)).abs() < 0.05, "r1 {r1}");
    }

    #[test]
    fn m1_noise_is_white() {
        let out = simulate(&SimSpec::new(SimModel::M1, 9)).unwrap();
        let z: Vec<f64> = out
            .x
            .values()
            .iter()
            .zip(&out.f)
            .map(|(x, f)| x - f)
            .collect();
        let (m, var) = mean_var(&z);
        assert!((var - 1.0).abs() < 0.15);
        assert!(m.abs() < 3.0 / (1000f64).sqrt());
        assert!(lag1_acf(&z).abs() < 0.1);
    }

    #[test]
    fn m13_coefficients_follow_the_mean_breaks() {
        let expect = |t: usize| match t {
            0..=100 => 0.3,
            101..=300 => 0.4,
            301..=500 => 0.6,
            501..=550 => 0.7,
            551..=750 => 0.5,
            _ => 0.3,
        };
        for t in 1..=1000 {
            assert_eq!(m13_coefficient(t), expect(t), "t = {t}");
        }
        assert!((m12_coefficient(1000, 1000) - 0.3).abs() < 1e-12);
        assert!((m12_coefficient(500, 1000) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_output_and_streams_differ() {
        for model in SimModel::ALL {
            let spec = SimSpec::new(model, 42).stream(3);
            let a = simulate(&spec).unwrap();
            let b = simulate(&spec).unwrap();
            assert_eq!(a.x.values(), b.x.values());
            let c = simulate(&spec.clone().stream(4)).unwrap();
            assert_ne!(a.x.values(), c.x.values());
            assert_eq!(a.truth, model.change_points(model.default_length()));
        }
    }

    #[test]
    fn m4_parameters_are_recorded() {
        let out = simulate(&SimSpec::new(SimModel::M4, 11)).unwrap();
        let (a, b) = (out.meta.ar[0], out.meta.ma[0]);
        assert!(a.abs() < 0.9 && b.abs() < 0.9);
        assert!(
            (out.meta.sigma_eps - ((1.0 - a * a) / (1.0 + a * b + b * b)).sqrt()).abs() < 1e-15
        );
    }

    #[test]
    fn parses_model_ids() {
        assert_eq!("M13".parse::<SimModel>().unwrap(), SimModel::M13);
        assert_eq!("m1".parse::<SimModel>().unwrap(), SimModel::M1);
        assert!("M14".parse::<SimModel>().is_err());
        assert!("X1".parse::<SimModel>().is_err());
    }

    #[test]
    fn short_override_is_rejected() {
        assert!(simulate(&SimSpec::new(SimModel::M1, 1).with_length(700)).is_err());
    }
}
