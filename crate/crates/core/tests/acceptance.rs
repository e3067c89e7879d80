// SPDX-License-Identifier: MIT OR Apache-2.0

//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero when any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde_json::Value;

use wemgsc::benchmark::{run_benchmark, BenchmarkOptions};
use wemgsc::metrics::{hausdorff, BenchmarkReport};
use wemgsc::refine::refine_locations;
use wemgsc::regression::build_design;
use wemgsc::sequence::dc_sequence;
use wemgsc::simgen::{arma_noise, build_signal, simulate};
use wemgsc::wbs::{wbs2_solution_path, wbs2_solution_path_with, Parallelism};
use wemgsc::{detect, DetectorConfig, GapMethod, SeriesData, SimModel, SimSpec};

const SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn rng(stream: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn gaussian(r: &mut ChaCha20Rng, n: usize, sd: f64) -> Vec<f64> {
    (0..n)
        .map(|_| sd * r.sample::<f64, _>(StandardNormal))
        .collect()
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

// independent contrast: sqrt((b-l)(r-b)/(r-l)) * (mean(l..b) - mean(b..r))
fn contrast(x: &[f64], l: usize, b: usize, r: usize) -> f64 {
    let left = x[l..b].iter().sum::<f64>() / (b - l) as f64;
    let right = x[b..r].iter().sum::<f64>() / (r - b) as f64;
    (((b - l) * (r - b)) as f64 / (r - l) as f64).sqrt() * (left - right)
}

fn c1_brute_force() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    for k in 0..50u64 {
        let mut r = rng(k);
        let n = r.random_range(3..=30);
        let x = gaussian(&mut r, n, 1.0);
        let all = (n + 1) * n / 2;
        let path = wbs2_solution_path_with(&x, all, 1, Parallelism::Sequential);
        // exhaustive: larger stat, then smaller b, l, r
        let mut best: Option<(usize, usize, usize, f64)> = None;
        for l in 0..n {
            for e in (l + 2)..=n {
                for b in (l + 1)..e {
                    let v = contrast(&x, l, b, e).abs();
                    let better = match best {
                        None => true,
                        Some((bl, bb, be, bv)) => v > bv || (v == bv && (b, l, e) < (bb, bl, be)),
                    };
                    if better {
                        best = Some((l, b, e, v));
                    }
                }
            }
        }
        let (l, b, e, v) = best.unwrap();
        let top = path.entries[0];
        if (top.s, top.b, top.e) != (l, b, e) || (top.stat - v).abs() > 1e-12 * v.max(1.0) {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: mismatches == 0 && within(t, 5),
        detail: format!(
            "{mismatches}/50 mismatches, {:.2}s (limit 5s)",
            t.as_secs_f64()
        ),
    }
}

fn c2_merged_column() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..200u64 {
        let mut r = rng(1000 + k);
        let n = r.random_range(4..=200);
        let count = r.random_range(1..=(n - 1).min(8));
        let mut cps: Vec<usize> = (0..count).map(|_| r.random_range(1..n)).collect();
        cps.sort_unstable();
        cps.dedup();
        let j = r.random_range(0..cps.len());
        let u = SeriesData::new(gaussian(&mut r, n, 1.0)).unwrap();
        let fitted = |c: &[usize]| {
            let d = build_design(&u, c, 0).unwrap();
            d.matrix
                .mul_vec(&wemgsc::lstsq::solve(&d.matrix, &d.response).coef)
        };
        let mut merged = cps.clone();
        merged.remove(j);
        // RSS(merged) - RSS(full) as the squared norm between the two fits
        let lhs: f64 = fitted(&cps)
            .iter()
            .zip(fitted(&merged))
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let left = if j == 0 { 0 } else { cps[j - 1] };
        let right = cps.get(j + 1).copied().unwrap_or(n);
        let rhs = contrast(u.values(), left, cps[j], right).powi(2);
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    let t = start.elapsed();
    Outcome {
        pass: worst <= 1e-8 && within(t, 10),
        detail: format!(
            "max relative error {worst:.2e} (limit 1e-8), {:.2}s (limit 10s)",
            t.as_secs_f64()
        ),
    }
}

fn c3_noiseless_recovery() -> Outcome {
    let start = Instant::now();
    let f = build_signal(&SimSpec::new(SimModel::M1, SEED)).unwrap();
    let truth = SimModel::M1.change_points(1000);
    let cfg = DetectorConfig::for_length(1000);
    let mut good = 0;
    for k in 0..100u64 {
        let z = gaussian(&mut rng(2000 + k), 1000, 0.05);
        let x = SeriesData::new(f.iter().zip(&z).map(|(a, b)| a + b).collect()).unwrap();
        let res = detect(&x, &cfg).unwrap();
        let cps = res.change_points();
        if cps.len() == 5 && hausdorff(cps, &truth, 1000) <= 3 {
            good += 1;
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: good >= 95 && within(t, 120),
        detail: format!(
            "{good}/100 with q=5 and d_H<=3 (need 95), {:.1}s (limit 120s)",
            t.as_secs_f64()
        ),
    }
}

fn find<'a>(reports: &'a [BenchmarkReport], model: &str, method: &str) -> &'a BenchmarkReport {
    reports
        .iter()
        .find(|r| r.model == model && r.method == method)
        .unwrap()
}

fn c4_c5_size_and_power() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut opts = BenchmarkOptions::new(
        vec![SimModel::M1, SimModel::M3, SimModel::M5, SimModel::M12],
        200,
        SEED,
    );
    opts.methods = vec![GapMethod::Ld, GapMethod::Dc];
    let reports = run_benchmark(&opts).unwrap().reports;
    let t = start.elapsed();

    let size = |m: &str| find(&reports, m, "LD").size.unwrap();
    let sizes = [("M1", 0.07), ("M5", 0.07), ("M12", 0.07), ("M3", 0.12)];
    let size_ok = sizes.iter().all(|&(m, lim)| size(m) <= lim);
    let c4 = Outcome {
        pass: size_ok && within(t, 600),
        detail: format!(
            "size M1 {:.3}, M5 {:.3}, M12 {:.3} (limit 0.07); M3 {:.3} (limit 0.12); {:.1}s",
            size("M1"),
            size("M5"),
            size("M12"),
            size("M3"),
            t.as_secs_f64()
        ),
    };

    let exact = |m: &str, method: &str| find(&reports, m, method).histogram[2];
    let power_ok =
        exact("M1", "LD") >= 0.85 && exact("M1", "DC") >= 0.85 && exact("M3", "LD") >= 0.70;
    let c5 = Outcome {
        pass: power_ok && within(t, 600),
        detail: format!(
            "P(q_hat=q) M1 LD {:.3}, M1 DC {:.3} (need 0.85); M3 {:.3} (need 0.70); {:.1}s",
            exact("M1", "LD"),
            exact("M1", "DC"),
            exact("M3", "LD"),
            t.as_secs_f64()
        ),
    };
    (c4, c5)
}

fn c6_dc_homogeneous() -> Outcome {
    let start = Instant::now();
    let (n, q) = (800usize, 7usize);
    let f: Vec<f64> = (0..n).map(|t| ((t / 100) % 2) as f64).collect();
    let cfg = DetectorConfig::for_length(n);
    let mut hits = 0;
    for k in 0..100u64 {
        let z = gaussian(&mut rng(3000 + k), n, 0.1);
        let x: Vec<f64> = f.iter().zip(&z).map(|(a, b)| a + b).collect();
        let path = wbs2_solution_path(&x, &cfg);
        let seq = dc_sequence(&path, cfg.max_candidates, cfg.max_models);
        if seq.method == GapMethod::Dc && seq.cuts.first() == Some(&q) {
            hits += 1;
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: hits >= 90 && within(t, 120),
        detail: format!(
            "g_1 = q in {hits}/100 (need 90), {:.1}s (limit 120s)",
            t.as_secs_f64()
        ),
    }
}

fn c7_ar_order() -> Outcome {
    let start = Instant::now();
    let cfg = DetectorConfig::for_length(1000);
    let mut hits = 0;
    for k in 0..100u64 {
        let z = arma_noise(&[0.75, -0.5], &[], 1.0, 1000, &mut rng(4000 + k)).unwrap();
        let res = detect(&SeriesData::new(z).unwrap(), &cfg).unwrap();
        if res.model.p_hat == 2 {
            hits += 1;
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: hits >= 85 && within(t, 120),
        detail: format!(
            "p_hat = 2 in {hits}/100 (need 85), {:.1}s (limit 120s)",
            t.as_secs_f64()
        ),
    }
}

fn c8_refinement() -> Outcome {
    let start = Instant::now();
    let truth = SimModel::M1.change_points(1000);
    let (mut before, mut after) = (0usize, 0usize);
    for k in 0..100u64 {
        let sim = simulate(&SimSpec::new(SimModel::M1, SEED).stream(5000 + k)).unwrap();
        let mut r = rng(6000 + k);
        let input: Vec<usize> = truth
            .iter()
            .map(|&t| (t as i64 + r.random_range(-10..=10)) as usize)
            .collect();
        let refined = refine_locations(sim.x.values(), &input).unwrap();
        before += input
            .iter()
            .zip(&truth)
            .map(|(a, b)| a.abs_diff(*b))
            .sum::<usize>();
        after += refined
            .iter()
            .zip(&truth)
            .map(|(a, b)| a.abs_diff(*b))
            .sum::<usize>();
    }
    let t = start.elapsed();
    let denom = 100.0 * truth.len() as f64;
    let (mb, ma) = (before as f64 / denom, after as f64 / denom);
    Outcome {
        pass: ma <= mb && within(t, 60),
        detail: format!(
            "mean |error| before {mb:.3}, after {ma:.3}, {:.2}s (limit 60s)",
            t.as_secs_f64()
        ),
    }
}

fn c9_determinism() -> Outcome {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/m1_seed2.csv");
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_wemgsc"));
        cmd.arg("detect").arg(&fixture);
        if let Some(t) = threads {
            cmd.args(["--threads", t]);
        }
        let out = cmd.output().expect("spawn");
        assert!(out.status.success());
        out.stdout
    };
    let reference = run(None);
    let mut outputs = vec![run(None), run(None)];
    for t in ["1", "4", "8"] {
        outputs.push(run(Some(t)));
    }
    let same = outputs.iter().all(|o| *o == reference);
    Outcome {
        pass: same,
        detail: format!("{} runs byte-identical: {same}", outputs.len() + 1),
    }
}

fn c10_golden() -> Outcome {
    let start = Instant::now();
    let mut opts = BenchmarkOptions::new(SimModel::ALL.to_vec(), 100, SEED);
    opts.methods = vec![GapMethod::Ld, GapMethod::Dc];
    let reports = run_benchmark(&opts).unwrap().reports;
    let t = start.elapsed();
    let golden_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden_benchmark.json");
    let golden: Vec<BenchmarkReport> = serde_json::from_value(
        serde_json::from_str::<Value>(&std::fs::read_to_string(golden_path).unwrap()).unwrap(),
    )
    .unwrap();
    let mut drift = 0.0f64;
    let mut shape_ok = golden.len() == reports.len();
    for (g, r) in golden.iter().zip(&reports) {
        shape_ok &= g.model == r.model && g.method == r.method;
        drift = drift.max((g.size.unwrap_or(0.0) - r.size.unwrap_or(0.0)).abs());
        for (a, b) in g.histogram.iter().zip(&r.histogram) {
            drift = drift.max((a - b).abs());
        }
    }
    Outcome {
        pass: shape_ok && drift <= 0.05 && within(t, 1800),
        detail: format!(
            "{} rows, max drift {drift:.3} (limit 0.05), {:.1}s (limit 1800s)",
            reports.len(),
            t.as_secs_f64()
        ),
    }
}

fn main() {
    let (c4, c5) = c4_c5_size_and_power();
    let results = [
        ("1 brute-force CUSUM oracle", c1_brute_force()),
        ("2 merged-column RSS identity", c2_merged_column()),
        ("3 low-noise recovery", c3_noiseless_recovery()),
        ("4 size under the null", c4),
        ("5 power under the alternative", c5),
        ("6 DC first cut on equal jumps", c6_dc_homogeneous()),
        ("7 AR order recovery", c7_ar_order()),
        ("8 refinement does not degrade", c8_refinement()),
        ("9 detect output determinism", c9_determinism()),
        ("10 benchmark golden file", c10_golden()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
