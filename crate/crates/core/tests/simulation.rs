// SPDX-License-Identifier: MIT OR Apache-2.0

use wemgsc::simgen::{m13_coefficient, simulate, SimModel, SimSpec};

fn acf(v: &[f64], lag: usize) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>();
    v.iter()
        .zip(&v[lag..])
        .map(|(a, b)| (a - m) * (b - m))
        .sum::<f64>()
        / var
}

fn noise(model: SimModel, seed: u64, n: usize) -> Vec<f64> {
    let out = simulate(&SimSpec::new(model, seed).with_length(n).null(true)).unwrap();
    out.x.values().to_vec()
}

#[test]
fn ma1_lag_one_autocorrelation() {
    // b / (1 + b^2) at b = -0.9
    let r = acf(&noise(SimModel::M6, 3, 50_000), 1);
    assert!((r - (-0.497)).abs() < 0.02, "r = {r}");
    assert!(acf(&noise(SimModel::M6, 3, 50_000), 2).abs() < 0.02);
}

#[test]
fn ma4_cuts_off_after_lag_four() {
    let z = noise(SimModel::M7, 4, 50_000);
    assert!(acf(&z, 4) > 0.1);
    assert!(acf(&z, 5).abs() < 0.03);
}

#[test]
fn ar1_models_have_unit_variance_and_right_acf() {
    for (model, a) in [(SimModel::M3, 0.5), (SimModel::M10, 0.9)] {
        let z = noise(model, 5, 100_000);
        let n = z.len() as f64;
        let var = z.iter().map(|v| v * v).sum::<f64>() / n;
        assert!((var - 1.0).abs() < 0.1, "{model}: var {var}");
        assert!((acf(&z, 1) - a).abs() < 0.03, "{model}");
    }
}

#[test]
fn noise_means_are_near_zero() {
    for model in [
        SimModel::M1,
        SimModel::M2,
        SimModel::M3,
        SimModel::M5,
        SimModel::M6,
        SimModel::M7,
        SimModel::M8,
    ] {
        let z = noise(model, 11, 20_000);
        let n = z.len() as f64;
        let m = z.iter().sum::<f64>() / n;
        let sd = (z.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt();
        // long-run sd can exceed the marginal one; allow for it generously
        assert!(m.abs() < 3.0 * 6.0 * sd / n.sqrt(), "{model}: mean {m}");
    }
}

#[test]
fn m13_coefficients_switch_with_the_mean() {
    let seq: Vec<f64> = [1, 100, 101, 300, 301, 500, 501, 550, 551, 750, 751, 1000]
        .iter()
        .map(|&t| m13_coefficient(t))
        .collect();
    assert_eq!(
        seq,
        [0.3, 0.3, 0.4, 0.4, 0.6, 0.6, 0.7, 0.7, 0.5, 0.5, 0.3, 0.3]
    );
}

#[test]
fn m9_has_fifteen_changes_with_alternating_levels() {
    let out = simulate(&SimSpec::new(SimModel::M9, 7)).unwrap();
    assert_eq!(out.truth.len(), 15);
    assert_eq!(
        out.truth,
        (1..=15usize)
            .map(|j| (2000 * j).div_ceil(16))
            .collect::<Vec<_>>()
    );
    for (j, &t) in std::iter::once(&0).chain(&out.truth).enumerate() {
        let level = out.f[t];
        assert_eq!(level > 0.0, j % 2 == 0);
        assert!((1.0..2.0).contains(&level.abs()));
    }
}

#[test]
fn replication_stream_is_reproducible_alone() {
    let all: Vec<Vec<f64>> = (0..5)
        .map(|r| {
            simulate(&SimSpec::new(SimModel::M4, 9).stream(r))
                .unwrap()
                .x
                .values()
                .to_vec()
        })
        .collect();
    let third = simulate(&SimSpec::new(SimModel::M4, 9).stream(3)).unwrap();
    assert_eq!(third.x.values(), all[3].as_slice());
}
