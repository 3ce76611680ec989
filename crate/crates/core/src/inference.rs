//! Feasible confidence intervals and t-statistics.
//!
//! The estimators satisfy a mixed Gaussian limit theory whose asymptotic
//! variance is `variance_factor * quarticity` (2 * IQ for realized variance,
//! Lambda_m * IQ for the range-based family). Three standardizations are
//! supported: the raw statistic and the delta-method log and square-root
//! transforms, which behave better in small samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::normal_quantile;

/// Which estimator produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorKind {
    #[serde(rename = "rv")]
    Rv,
    #[serde(rename = "rrv")]
    Rrv,
    #[serde(rename = "rrv_m")]
    RrvM,
    #[serde(rename = "rrv_irregular")]
    RrvIrregular,
}

impl EstimatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorKind::Rv => "rv",
            EstimatorKind::Rrv => "rrv",
            EstimatorKind::RrvM => "rrv_m",
            EstimatorKind::RrvIrregular => "rrv_irregular",
        }
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rv" => Ok(EstimatorKind::Rv),
            "rrv" => Ok(EstimatorKind::Rrv),
            "rrv_m" | "rrv-m" => Ok(EstimatorKind::RrvM),
            "rrv_irregular" | "rrv-irregular" => Ok(EstimatorKind::RrvIrregular),
            other => Err(Error::Parse(format!("unknown estimator tag: {other}"))),
        }
    }
}

/// Standardization applied before forming the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Raw,
    Log,
    Sqrt,
}

impl Transform {
    pub fn as_str(&self) -> &'static str {
        match self {
            Transform::Raw => "raw",
            Transform::Log => "log",
            Transform::Sqrt => "sqrt",
        }
    }
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Transform::Raw),
            "log" => Ok(Transform::Log),
            "sqrt" => Ok(Transform::Sqrt),
            other => Err(Error::Parse(format!("unknown transform: {other}"))),
        }
    }
}

/// A two-sided confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }
}

fn validate(point: f64, quarticity: f64, n: usize, variance_factor: f64, transform: Transform) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("sample size n must be positive".into()));
    }
    if !(quarticity > 0.0) {
        return Err(Error::Domain(format!(
            "feasible quarticity must be positive, got {quarticity}"
        )));
    }
    if !(variance_factor > 0.0) {
        return Err(Error::Domain(format!(
            "variance factor must be positive, got {variance_factor}"
        )));
    }
    if matches!(transform, Transform::Log | Transform::Sqrt) && !(point > 0.0) {
        return Err(Error::Domain(format!(
            "{} transform needs a positive point estimate, got {point}",
            transform.as_str()
        )));
    }
    if !point.is_finite() {
        return Err(Error::Domain(format!("point estimate must be finite, got {point}")));
    }
    Ok(())
}

/// Two-sided confidence interval for the integrated variance.
///
/// * raw:  point ± z sqrt(vf q / n)
/// * log:  exp(ln point ± z sqrt(vf q / (n point^2)))
/// * sqrt: (sqrt(point) ± z sqrt(vf q / (4 n point)))^2, the lower root
///   floored at 0 before squaring (the parameter is nonnegative).
///
/// z is the standard normal quantile at (1 + level)/2.
pub fn confidence_interval(
    point: f64,
    quarticity: f64,
    n: usize,
    variance_factor: f64,
    transform: Transform,
    level: f64,
) -> Result<Interval> {
    validate(point, quarticity, n, variance_factor, transform)?;
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level must be in (0, 1), got {level}")));
    }
    let z = normal_quantile(0.5 * (1.0 + level))?;
    let nf = n as f64;
    let avar = variance_factor * quarticity;
    Ok(match transform {
        Transform::Raw => {
            let hw = z * (avar / nf).sqrt();
            Interval {
                low: point - hw,
                high: point + hw,
            }
        }
        Transform::Log => {
            let se = (avar / (nf * point * point)).sqrt();
            Interval {
                low: point * (-z * se).exp(),
                high: point * (z * se).exp(),
            }
        }
        Transform::Sqrt => {
            let se = (avar / (4.0 * nf * point)).sqrt();
            let root = point.sqrt();
            let lo = (root - z * se).max(0.0);
            Interval {
                low: lo * lo,
                high: (root + z * se).powi(2),
            }
        }
    })
}

/// Feasible t-statistic of `point` against a known truth.
///
/// * raw:  sqrt(n)(point - truth) / sqrt(vf q)
/// * log:  sqrt(n)(ln point - ln truth) / sqrt(vf q / point^2)
/// * sqrt: sqrt(n)(sqrt point - sqrt truth) / sqrt(vf q / (4 point))
pub fn t_statistic(
    point: f64,
    truth: f64,
    quarticity: f64,
    n: usize,
    variance_factor: f64,
    transform: Transform,
) -> Result<f64> {
    validate(point, quarticity, n, variance_factor, transform)?;
    if matches!(transform, Transform::Log | Transform::Sqrt) && !(truth > 0.0) {
        return Err(Error::Domain(format!(
            "{} transform needs a positive truth, got {truth}",
            transform.as_str()
        )));
    }
    let nf = n as f64;
    let avar = variance_factor * quarticity;
    Ok(match transform {
        Transform::Raw => nf.sqrt() * (point - truth) / avar.sqrt(),
        Transform::Log => nf.sqrt() * (point.ln() - truth.ln()) / (avar / (point * point)).sqrt(),
        Transform::Sqrt => {
            nf.sqrt() * (point.sqrt() - truth.sqrt()) / (avar / (4.0 * point)).sqrt()
        }
    })
}

/// A point estimate with its feasible confidence interval; one CSV row per
/// day and estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub day_id: String,
    pub estimator: EstimatorKind,
    pub point: f64,
    pub quarticity: f64,
    pub n: usize,
    pub variance_factor: f64,
    pub transform: Transform,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level: f64,
}

impl EstimateRecord {
    /// Build a record, computing the interval from the feasible variance.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        day_id: impl Into<String>,
        estimator: EstimatorKind,
        point: f64,
        quarticity: f64,
        n: usize,
        variance_factor: f64,
        transform: Transform,
        level: f64,
    ) -> Result<Self> {
        let ci = confidence_interval(point, quarticity, n, variance_factor, transform, level)?;
        Ok(EstimateRecord {
            day_id: day_id.into(),
            estimator,
            point,
            quarticity,
            n,
            variance_factor,
            transform,
            ci_low: ci.low,
            ci_high: ci.high,
            level,
        })
    }

    pub fn interval(&self) -> Interval {
        Interval {
            low: self.ci_low,
            high: self.ci_high,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn raw_interval_reproduces_rv_band() {
        // variance factor 2 with the raw transform is the classical realized
        // variance band: point ± z sqrt(2 q / n).
        let ci = confidence_interval(1.0, 1.5, 100, 2.0, Transform::Raw, 0.95).unwrap();
        let hw = 1.959963984540054 * (2.0 * 1.5 / 100.0_f64).sqrt();
        assert_relative_eq!(ci.low, 1.0 - hw, max_relative = 1e-12);
        assert_relative_eq!(ci.high, 1.0 + hw, max_relative = 1e-12);
    }

    #[test]
    fn vanishing_quarticity_collapses_interval() {
        for t in [Transform::Raw, Transform::Log, Transform::Sqrt] {
            let ci = confidence_interval(1.0, 1e-300, 100, 2.0, t, 0.95).unwrap();
            assert!(ci.width() < 1e-140, "{t:?}: width {}", ci.width());
            assert!(ci.contains(1.0));
        }
        assert!(confidence_interval(1.0, 0.0, 100, 2.0, Transform::Raw, 0.95).is_err());
        assert!(confidence_interval(1.0, -1.0, 100, 2.0, Transform::Raw, 0.95).is_err());
    }

    #[test]
    fn log_and_sqrt_intervals_stay_positive() {
        // Large dispersion: the raw band goes negative, the transforms don't.
        let raw = confidence_interval(0.1, 4.0, 10, 2.0, Transform::Raw, 0.99).unwrap();
        assert!(raw.low < 0.0);
        let log = confidence_interval(0.1, 4.0, 10, 2.0, Transform::Log, 0.99).unwrap();
        assert!(log.low > 0.0);
        let sq = confidence_interval(0.1, 4.0, 10, 2.0, Transform::Sqrt, 0.99).unwrap();
        assert!(sq.low >= 0.0);
        assert!(confidence_interval(0.0, 4.0, 10, 2.0, Transform::Log, 0.99).is_err());
    }

    #[test]
    fn t_statistic_zero_at_truth_and_signed() {
        for t in [Transform::Raw, Transform::Log, Transform::Sqrt] {
            assert_eq!(t_statistic(1.3, 1.3, 2.0, 50, 0.4, t).unwrap(), 0.0);
            assert!(t_statistic(1.5, 1.3, 2.0, 50, 0.4, t).unwrap() > 0.0);
            assert!(t_statistic(1.1, 1.3, 2.0, 50, 0.4, t).unwrap() < 0.0);
        }
    }

    #[test]
    fn transforms_agree_to_first_order_for_tight_intervals() {
        // Once the raw half-width is below 1% of the point the delta-method
        // intervals agree: |raw width / log width - 1| <= 0.01.
        let point = 2.0;
        let n = 1_000_000;
        let q = 4.0;
        let raw = confidence_interval(point, q, n, 0.4, Transform::Raw, 0.95).unwrap();
        assert!(raw.width() / 2.0 < 0.01 * point);
        let log = confidence_interval(point, q, n, 0.4, Transform::Log, 0.95).unwrap();
        let sqrt = confidence_interval(point, q, n, 0.4, Transform::Sqrt, 0.95).unwrap();
        assert!((raw.width() / log.width() - 1.0).abs() <= 0.01);
        assert!((raw.width() / sqrt.width() - 1.0).abs() <= 0.01);
    }

    #[test]
    fn interval_width_monotonicity() {
        let base = confidence_interval(1.0, 2.0, 100, 0.4, Transform::Log, 0.95).unwrap();
        let more_vf = confidence_interval(1.0, 2.0, 100, 0.8, Transform::Log, 0.95).unwrap();
        let more_q = confidence_interval(1.0, 4.0, 100, 0.4, Transform::Log, 0.95).unwrap();
        let more_n = confidence_interval(1.0, 2.0, 400, 0.4, Transform::Log, 0.95).unwrap();
        assert!(more_vf.width() > base.width());
        assert!(more_q.width() > base.width());
        assert!(more_n.width() < base.width());
    }

    #[test]
    fn interval_shrinks_like_root_n() {
        // Raw width scales exactly as 1/sqrt(n) with point and quarticity fixed.
        let w1 = confidence_interval(1.0, 2.0, 100, 0.4, Transform::Raw, 0.95)
            .unwrap()
            .width();
        let w2 = confidence_interval(1.0, 2.0, 400, 0.4, Transform::Raw, 0.95)
            .unwrap()
            .width();
        assert_relative_eq!(w1 / w2, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn record_keeps_interval_ordered() {
        let rec = EstimateRecord::new(
            "2000-01-03",
            EstimatorKind::RrvM,
            0.8,
            1.1,
            78,
            0.7,
            Transform::Log,
            0.95,
        )
        .unwrap();
        assert!(rec.ci_low <= rec.point && rec.point <= rec.ci_high);
        assert!(rec.ci_low > 0.0);
    }
}
