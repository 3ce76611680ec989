//! Monte Carlo studies: coverage of the feasible limit theory, the
//! efficiency comparison against realized variance, and the kernel-density
//! summaries of standardized errors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{rrq, rrv, rv, RrvMode};
use crate::inference::{confidence_interval, t_statistic, Transform};
use crate::moments::LambdaTable;
use crate::rng::mix;
use crate::simulate::{simulate_constant_sigma_day, simulate_sv_day, SvScenario};
use crate::special::normal_cdf;

/// Coverage levels every study reports.
pub const COVERAGE_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

/// Aggregated behaviour of the standardized errors for one (n, m, transform)
/// cell. With a single replication the dispersion is degenerate: std is 0
/// and the standardized shape moments are NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub n: u32,
    pub m: u32,
    pub transform: Transform,
    pub reps: u32,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub coverage90: f64,
    pub coverage95: f64,
    pub coverage99: f64,
    pub ks_distance: f64,
}

/// Raw standardized errors for one cell, kept for density plots.
#[derive(Debug, Clone, PartialEq)]
pub struct TStatSamples {
    pub n: u32,
    pub m: u32,
    pub transform: Transform,
    pub t_stats: Vec<f64>,
}

/// Output of [`run_coverage_study`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub scenario: String,
    pub rows: Vec<CoverageRow>,
    pub samples: Vec<TStatSamples>,
}

/// Simulate `reps` days of the stochastic volatility model for every (n, m)
/// in the grid, standardize the range-based estimate against the day's
/// realized truth under each transform, and aggregate coverage and shape.
///
/// Deterministic for fixed (parameters, grid, reps, seed); replications run
/// in parallel with per-day substreams.
pub fn run_coverage_study(
    theta: f64,
    omega: f64,
    eta: f64,
    grid: &[(u32, u32)],
    transforms: &[Transform],
    reps: u32,
    seed: u64,
    table: &LambdaTable,
) -> Result<CoverageReport> {
    if reps == 0 {
        return Err(Error::InvalidInput("need at least one replication".into()));
    }
    if grid.is_empty() || transforms.is_empty() {
        return Err(Error::InvalidInput(
            "coverage study needs a nonempty (n, m) grid and transform set".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for &(n, m) in grid {
        let cell = run_coverage_cell(theta, omega, eta, n, m, transforms, reps, seed, table)
            .map_err(|e| {
                Error::Numeric(format!("coverage cell (n={n}, m={m}) failed: {e}"))
            })?;
        for (t, ts, covers) in cell {
            let (mean, std, skewness, kurtosis) = sample_moments(&ts);
            let ks = ks_distance_to_normal(&ts);
            rows.push(CoverageRow {
                n,
                m,
                transform: t,
                reps,
                mean,
                std,
                skewness,
                kurtosis,
                coverage90: covers[0],
                coverage95: covers[1],
                coverage99: covers[2],
                ks_distance: ks,
            });
            samples.push(TStatSamples {
                n,
                m,
                transform: t,
                t_stats: ts,
            });
        }
    }
    Ok(CoverageReport {
        scenario: format!(
            "sv theta={theta} omega={omega} eta={eta} reps={reps} seed={seed}"
        ),
        rows,
        samples,
    })
}

type CellResult = Vec<(Transform, Vec<f64>, [f64; 3])>;

#[allow(clippy::too_many_arguments)]
fn run_coverage_cell(
    theta: f64,
    omega: f64,
    eta: f64,
    n: u32,
    m: u32,
    transforms: &[Transform],
    reps: u32,
    seed: u64,
    table: &LambdaTable,
) -> Result<CellResult> {
    let scenario = SvScenario::new(theta, omega, eta, n * m, n, 1, seed, reps)?;
    let per_rep: Vec<Result<Vec<(f64, [bool; 3])>>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let day = simulate_sv_day(&scenario, rep);
            let rs = day.range_series(n, m)?;
            let point = rrv(&rs, table, RrvMode::Homogeneous(m))?;
            let quarticity = rrq(&rs, table, RrvMode::Homogeneous(m))?;
            let vf = table.variance_factor_at(m)?.value;
            let mut out = Vec::with_capacity(transforms.len());
            for &t in transforms {
                let tstat = t_statistic(point, day.true_iv, quarticity, n as usize, vf, t)?;
                let mut covered = [false; 3];
                for (i, level) in COVERAGE_LEVELS.iter().enumerate() {
                    let ci =
                        confidence_interval(point, quarticity, n as usize, vf, t, *level)?;
                    covered[i] = ci.contains(day.true_iv);
                }
                out.push((tstat, covered));
            }
            Ok(out)
        })
        .collect();

    let mut t_stats: Vec<Vec<f64>> = vec![Vec::with_capacity(reps as usize); transforms.len()];
    let mut cover_counts: Vec<[u64; 3]> = vec![[0; 3]; transforms.len()];
    for rep in per_rep {
        let rep = rep?;
        for (ti, (tstat, covered)) in rep.into_iter().enumerate() {
            t_stats[ti].push(tstat);
            for (i, c) in covered.iter().enumerate() {
                if *c {
                    cover_counts[ti][i] += 1;
                }
            }
        }
    }
    Ok(transforms
        .iter()
        .zip(t_stats)
        .zip(cover_counts)
        .map(|((t, ts), counts)| {
            let fractions = [
                counts[0] as f64 / reps as f64,
                counts[1] as f64 / reps as f64,
                counts[2] as f64 / reps as f64,
            ];
            (*t, ts, fractions)
        })
        .collect())
}

/// One row of the efficiency study: the sampling-variance ratio of the
/// range-based estimator over realized variance at a common interval count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub m: u32,
    pub var_rv: f64,
    pub var_rrv: f64,
    pub ratio: f64,
    /// The variance factor the ratio implies (ratio times the RV constant 2).
    pub implied_variance_factor: f64,
}

/// Constant-volatility efficiency comparison. For each m, `reps` unit-sigma
/// days of n intervals with m increments each are simulated; the ratio of
/// sample variances var(rrv)/var(rv) approaches Lambda_m / 2.
pub fn run_efficiency_study(
    m_list: &[u32],
    n: u32,
    reps: u32,
    seed: u64,
    table: &LambdaTable,
) -> Result<Vec<EfficiencyRow>> {
    if reps < 2 {
        return Err(Error::InvalidInput("variance ratios need reps >= 2".into()));
    }
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let per_rep: Vec<Result<(f64, f64)>> = (0..reps)
            .into_par_iter()
            .map(|rep| {
                let day_seed = mix(mix(seed, u64::from(m)), u64::from(rep));
                let day = simulate_constant_sigma_day(1.0, n * m, day_seed)?;
                let vr = rv(&day.return_series(n)?);
                let vrr = rrv(&day.range_series(n, m)?, table, RrvMode::Homogeneous(m))?;
                Ok((vr, vrr))
            })
            .collect();
        let mut rvs = Vec::with_capacity(reps as usize);
        let mut rrvs = Vec::with_capacity(reps as usize);
        for r in per_rep {
            let (a, b) = r.map_err(|e| Error::Numeric(format!("efficiency m={m}: {e}")))?;
            rvs.push(a);
            rrvs.push(b);
        }
        let var_rv = sample_variance(&rvs);
        let var_rrv = sample_variance(&rrvs);
        let ratio = var_rrv / var_rv;
        rows.push(EfficiencyRow {
            m,
            var_rv,
            var_rrv,
            ratio,
            implied_variance_factor: 2.0 * ratio,
        });
    }
    Ok(rows)
}

/// Gaussian kernel density with Silverman's bandwidth 1.06 std k^(-1/5),
/// evaluated on a caller-supplied grid.
pub fn kernel_density(samples: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    let h = silverman_bandwidth(samples)?;
    let k = samples.len() as f64;
    Ok(grid
        .par_iter()
        .map(|&x| {
            let mut acc = 0.0;
            for &s in samples {
                let u = (x - s) / h;
                acc += (-0.5 * u * u).exp();
            }
            acc / (k * h * crate::special::SQRT_2PI)
        })
        .collect())
}

/// Silverman bandwidth; rejects degenerate samples.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(
            "kernel density needs at least two samples".into(),
        ));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    if var == 0.0 {
        return Err(Error::Domain(
            "kernel density of an all-equal sample is degenerate".into(),
        ));
    }
    Ok(1.06 * var.sqrt() * n.powf(-0.2))
}

/// Evaluation grid spanning the samples padded by five bandwidths.
pub fn density_grid(samples: &[f64], points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidInput("density grid needs >= 2 points".into()));
    }
    let h = silverman_bandwidth(samples)?;
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min) - 5.0 * h;
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 5.0 * h;
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| lo + step * i as f64).collect())
}

/// One-sample Kolmogorov-Smirnov distance to the standard normal.
pub fn ks_distance_to_normal(samples: &[f64]) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut sup = 0.0f64;
    for (i, x) in xs.iter().enumerate() {
        let cdf = normal_cdf(*x);
        sup = sup
            .max((cdf - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - cdf).abs());
    }
    sup
}

fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
}

/// Lenient moments: a single observation reports zero dispersion and NaN
/// shape instead of failing, per the degenerate-replication contract.
fn sample_moments(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0, f64::NAN, f64::NAN);
    }
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &x in xs {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if m2 == 0.0 {
        return (mean, 0.0, f64::NAN, f64::NAN);
    }
    (mean, m2.sqrt(), m3 / m2.powf(1.5), m4 / (m2 * m2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::LambdaTable;
    use crate::rng::substream;
    use crate::special::normal_pdf;
    use rand::Rng;
    use rand_distr::StandardNormal;
    use std::sync::OnceLock;

    fn table() -> &'static LambdaTable {
        static TABLE: OnceLock<LambdaTable> = OnceLock::new();
        TABLE.get_or_init(|| LambdaTable::build(&[1, 5, 10], 100_000, 12).unwrap())
    }

    #[test]
    fn kernel_density_tracks_the_normal() {
        let mut rng = substream(31, &[0]);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let grid: Vec<f64> = (0..301).map(|i| -3.0 + i as f64 * 0.02).collect();
        let dens = kernel_density(&samples, &grid).unwrap();
        let worst = grid
            .iter()
            .zip(&dens)
            .map(|(x, d)| (d - normal_pdf(*x)).abs())
            .fold(0.0f64, f64::max);
        assert!(worst <= 0.01, "max deviation {worst}");
    }

    #[test]
    fn kernel_density_symmetric_for_symmetric_sample() {
        let samples = [-1.0, 1.0];
        let grid = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
        let dens = kernel_density(&samples, &grid).unwrap();
        for (i, j) in [(0usize, 6usize), (1, 5), (2, 4)] {
            assert!((dens[i] - dens[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_density_rejects_degenerate_samples() {
        assert!(kernel_density(&[1.0], &[0.0]).is_err());
        assert!(kernel_density(&[2.0, 2.0, 2.0], &[0.0]).is_err());
    }

    #[test]
    fn kernel_density_integrates_to_one_on_padded_grid() {
        let mut rng = substream(32, &[0]);
        let samples: Vec<f64> = (0..5_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let grid = density_grid(&samples, 2001).unwrap();
        let dens = kernel_density(&samples, &grid).unwrap();
        let step = grid[1] - grid[0];
        let integral: f64 =
            step * (dens.iter().sum::<f64>() - 0.5 * (dens[0] + dens[dens.len() - 1]));
        assert!((integral - 1.0).abs() <= 1e-3, "integral {integral}");
    }

    #[test]
    fn ks_distance_small_for_normal_large_for_shifted() {
        let mut rng = substream(33, &[0]);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        assert!(ks_distance_to_normal(&xs) < 0.015);
        let shifted: Vec<f64> = xs.iter().map(|x| x + 1.0).collect();
        assert!(ks_distance_to_normal(&shifted) > 0.3);
    }

    #[test]
    fn efficiency_ratio_is_exactly_one_at_m_one() {
        // With one increment per interval the two estimators are the same
        // statistic, so the variance ratio is 1 to the last bit.
        let rows = run_efficiency_study(&[1], 20, 200, 5, table()).unwrap();
        assert_eq!(rows[0].ratio, 1.0);
        assert_eq!(rows[0].implied_variance_factor, 2.0);
    }

    #[test]
    fn efficiency_gain_appears_by_m_ten() {
        let rows = run_efficiency_study(&[10], 50, 2_000, 6, table()).unwrap();
        assert!(
            rows[0].ratio > 0.25 && rows[0].ratio < 0.5,
            "ratio {}",
            rows[0].ratio
        );
    }

    #[test]
    fn coverage_study_shape_and_determinism() {
        let run = || {
            run_coverage_study(
                0.032,
                -0.631,
                0.115,
                &[(25, 5)],
                &[Transform::Raw, Transform::Log],
                400,
                77,
                table(),
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2);
        for row in &a.rows {
            assert_eq!(row.reps, 400);
            for c in [row.coverage90, row.coverage95, row.coverage99] {
                assert!((0.0..=1.0).contains(&c));
            }
            assert!((0.0..=1.0).contains(&row.ks_distance));
            // Loose sanity: nominal 95% coverage within a wide band.
            assert!(row.coverage95 > 0.85 && row.coverage95 <= 1.0);
        }
        assert_eq!(a.samples[0].t_stats.len(), 400);
    }

    #[test]
    fn coverage_study_single_replication_is_degenerate_but_alive() {
        let rep = run_coverage_study(
            0.032,
            -0.631,
            0.115,
            &[(10, 5)],
            &[Transform::Log],
            1,
            3,
            table(),
        )
        .unwrap();
        assert_eq!(rep.rows[0].std, 0.0);
        assert!(rep.rows[0].skewness.is_nan());
    }

    #[test]
    fn coverage_study_rejects_empty_requests() {
        assert!(run_coverage_study(0.03, -0.6, 0.1, &[], &[Transform::Raw], 10, 1, table()).is_err());
        assert!(run_coverage_study(0.03, -0.6, 0.1, &[(10, 5)], &[], 10, 1, table()).is_err());
        assert!(
            run_coverage_study(0.03, -0.6, 0.1, &[(10, 5)], &[Transform::Raw], 0, 1, table())
                .is_err()
        );
    }
}
