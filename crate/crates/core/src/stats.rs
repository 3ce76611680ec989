//! Descriptive statistics and time-series diagnostics for estimator series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Moments and extremes of a series, Table-style: kurtosis is the raw
/// standardized fourth moment (Gaussian reference 3), not excess.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased (n-1) sample variance.
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub min: f64,
    pub max: f64,
}

/// Sample moments of a series.
///
/// Skewness and kurtosis are the standardized third and fourth central
/// moments (central moments normalized by n). A constant series has zero
/// variance and no standardized moments, which is rejected rather than
/// reported as NaN.
pub fn summarize(series: &[f64]) -> Result<SeriesSummary> {
    if series.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "summary needs at least two observations, got {}",
            series.len()
        )));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &x in series {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        min = min.min(x);
        max = max.max(x);
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if m2 == 0.0 {
        return Err(Error::Domain(
            "constant series: skewness and kurtosis are undefined".into(),
        ));
    }
    Ok(SeriesSummary {
        count: series.len(),
        mean,
        variance: m2 * n / (n - 1.0),
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2),
        min,
        max,
    })
}

/// Pearson correlation of two equal-length, nonconstant series.
pub fn correlation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "correlation needs equal lengths >= 2, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    let mut sab = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - ma;
        let dy = y - mb;
        saa += dx * dx;
        sbb += dy * dy;
        sab += dx * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::Domain("correlation of a constant series".into()));
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Sample autocorrelations at lags 1..=max_lag with the Bartlett white-noise
/// band 2/sqrt(T) (two standard errors).
///
/// The full-sample mean and the lag-0 sum of squares are used in every lag's
/// numerator and denominator.
pub fn acf(series: &[f64], max_lag: usize) -> Result<(Vec<f64>, f64)> {
    if max_lag == 0 {
        return Err(Error::InvalidInput("max_lag must be >= 1".into()));
    }
    if series.len() <= max_lag {
        return Err(Error::InvalidInput(format!(
            "series of length {} cannot support lag {max_lag}",
            series.len()
        )));
    }
    let t = series.len();
    let mean = series.iter().sum::<f64>() / t as f64;
    let denom: f64 = series.iter().map(|x| (x - mean) * (x - mean)).sum();
    if denom == 0.0 {
        return Err(Error::Domain("autocorrelation of a constant series".into()));
    }
    let mut coeffs = Vec::with_capacity(max_lag);
    for k in 1..=max_lag {
        let num: f64 = (k..t)
            .map(|i| (series[i] - mean) * (series[i - k] - mean))
            .sum();
        coeffs.push(num / denom);
    }
    Ok((coeffs, 2.0 / (t as f64).sqrt()))
}

/// Sample mean of the estimates at each sampling frequency; the signature
/// plot input. Frequencies with no estimates are rejected.
pub fn signature_curve(estimates_by_frequency: &[(u32, Vec<f64>)]) -> Result<Vec<(u32, f64)>> {
    if estimates_by_frequency.is_empty() {
        return Err(Error::InvalidInput("no frequencies supplied".into()));
    }
    let mut out = Vec::with_capacity(estimates_by_frequency.len());
    for (n, estimates) in estimates_by_frequency {
        if estimates.is_empty() {
            return Err(Error::InvalidInput(format!(
                "no estimates at sampling frequency {n}"
            )));
        }
        out.push((*n, estimates.iter().sum::<f64>() / estimates.len() as f64));
    }
    Ok(out)
}

/// Reporting convention: daily decimal variance scaled to an annualized
/// percentage (default 252 trading days, percent units). The raw daily
/// values stay the canonical stored form; this is display-only.
pub fn annualize(daily_variance: f64, days_per_year: f64) -> f64 {
    daily_variance * days_per_year * 100.0
}
