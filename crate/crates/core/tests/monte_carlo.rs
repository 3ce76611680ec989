//! Cross-module statistical invariants checked by Monte Carlo with fixed
//! seeds: unbiasedness and variance of the estimators on simulated paths,
//! error decay under partition refinement, coverage ordering across
//! transforms, and signature-curve behaviour with and without noise.

use rand::Rng;
use rand_distr::StandardNormal;
use std::sync::OnceLock;

use range_vol_core::estimators::{rrv, rv, RrvMode};
use range_vol_core::experiments::run_coverage_study;
use range_vol_core::inference::Transform;
use range_vol_core::moments::LambdaTable;
use range_vol_core::rng::{mix, substream};
use range_vol_core::simulate::simulate_constant_sigma_day;
use range_vol_core::stats::signature_curve;
use range_vol_core::ReturnSeries;

fn table() -> &'static LambdaTable {
    static TABLE: OnceLock<LambdaTable> = OnceLock::new();
    TABLE.get_or_init(|| LambdaTable::build(&[1, 10], 400_000, 2024).unwrap())
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn rv_is_consistent_for_sigma_squared() {
    let sigma = 0.8;
    let reps = 3000u32;
    let vals: Vec<f64> = (0..reps)
        .map(|r| {
            let day = simulate_constant_sigma_day(sigma, 1000, mix(1, u64::from(r))).unwrap();
            rv(&day.return_series(1000).unwrap())
        })
        .collect();
    let (mean, se) = mean_and_se(&vals);
    assert!(
        (mean - sigma * sigma).abs() < 3.0 * se,
        "rv mean {mean} vs {} (se {se})",
        sigma * sigma
    );
}

#[test]
fn rrv_is_unbiased_with_the_predicted_variance() {
    // Constant sigma, n = 50 intervals of m = 10: the estimator mean is
    // sigma^2 and its variance is Lambda_10 sigma^4 / n.
    let (n, m) = (50u32, 10u32);
    let reps = 5000u32;
    let vals: Vec<f64> = (0..reps)
        .map(|r| {
            let day = simulate_constant_sigma_day(1.0, n * m, mix(2, u64::from(r))).unwrap();
            rrv(
                &day.range_series(n, m).unwrap(),
                table(),
                RrvMode::Homogeneous(m),
            )
            .unwrap()
        })
        .collect();
    let (mean, se) = mean_and_se(&vals);
    assert!((mean - 1.0).abs() < 3.0 * se, "rrv mean {mean} (se {se})");
    let var = vals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (reps as f64 - 1.0);
    let predicted = table().variance_factor_at(m).unwrap().value / n as f64;
    assert!(
        (var / predicted - 1.0).abs() < 0.15,
        "rrv variance {var} vs predicted {predicted}"
    );
}

#[test]
fn rrv_rmse_decreases_under_partition_refinement() {
    let m = 10u32;
    let reps = 2000u32;
    let mut rmses = Vec::new();
    for (i, n) in [10u32, 50, 100].into_iter().enumerate() {
        let mut sq = 0.0;
        for r in 0..reps {
            let day =
                simulate_constant_sigma_day(1.0, n * m, mix(3 + i as u64, u64::from(r))).unwrap();
            let est = rrv(
                &day.range_series(n, m).unwrap(),
                table(),
                RrvMode::Homogeneous(m),
            )
            .unwrap();
            sq += (est - 1.0) * (est - 1.0);
        }
        rmses.push((sq / reps as f64).sqrt());
    }
    assert!(
        rmses[0] > rmses[1] && rmses[1] > rmses[2],
        "rmse not decreasing: {rmses:?}"
    );
}

#[test]
fn coverage_improves_with_n_and_log_beats_raw_when_small() {
    let report = run_coverage_study(
        0.032,
        -0.631,
        0.115,
        &[(10, 10), (100, 10)],
        &[Transform::Raw, Transform::Log],
        4000,
        99,
        table(),
    )
    .unwrap();
    let row = |n: u32, t: Transform| {
        report
            .rows
            .iter()
            .find(|r| r.n == n && r.transform == t)
            .unwrap()
    };
    // Distortions shrink as the sample grows (binomial slack at 4000 reps).
    let slack = 3.0 * (0.95f64 * 0.05 / 4000.0).sqrt();
    for t in [Transform::Raw, Transform::Log] {
        let small = (row(10, t).coverage95 - 0.95).abs();
        let large = (row(100, t).coverage95 - 0.95).abs();
        assert!(
            large <= small + slack,
            "{t:?}: |cov-0.95| went {small} -> {large}"
        );
    }
    // The log transform tracks the normal better at n = 10.
    assert!(row(10, Transform::Log).ks_distance <= row(10, Transform::Raw).ks_distance);
    // And the raw errors are left-skewed there.
    assert!(row(10, Transform::Raw).skewness < -0.1);
}

#[test]
fn signature_curve_flat_without_noise_rising_with_noise() {
    let frequencies = [13u32, 78, 390];
    let days = 150u32;
    let mn = 780u32;
    let noise_scale = 0.01;

    let mut clean: Vec<(u32, Vec<f64>)> = frequencies.iter().map(|n| (*n, Vec::new())).collect();
    let mut noisy: Vec<(u32, Vec<f64>)> = clean.clone();
    for d in 0..days {
        let day = simulate_constant_sigma_day(1.0, mn, mix(7, u64::from(d))).unwrap();
        let mut noise_rng = substream(8, &[u64::from(d)]);
        let noisy_prices: Vec<f64> = day
            .prices
            .iter()
            .map(|p| p + noise_scale * noise_rng.sample::<f64, _>(StandardNormal))
            .collect();
        for (i, n) in frequencies.iter().enumerate() {
            clean[i].1.push(rv(&day.return_series(*n).unwrap()));
            let stride = (mn / n) as usize;
            let rets: Vec<f64> = (0..*n as usize)
                .map(|k| noisy_prices[(k + 1) * stride] - noisy_prices[k * stride])
                .collect();
            noisy[i]
                .1
                .push(rv(&ReturnSeries::equidistant(day.day_id.clone(), rets).unwrap()));
        }
    }
    // Clean constant-sigma days: the curve is flat up to Monte Carlo error.
    let flat = signature_curve(&clean).unwrap();
    let lo = flat.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    let hi = flat.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo < 0.08, "clean signature not flat: {flat:?}");

    // Additive iid noise inflates rv by about 2 n xi^2, so the noise
    // contribution — isolated by differencing against the same clean paths —
    // rises with the sampling frequency (sign check only).
    let rising = signature_curve(&noisy).unwrap();
    let diffs: Vec<f64> = rising
        .iter()
        .zip(&flat)
        .map(|((_, noisy), (_, clean))| noisy - clean)
        .collect();
    assert!(
        diffs[0] < diffs[1] && diffs[1] < diffs[2],
        "noise contribution not increasing across frequencies: {diffs:?}"
    );
}
