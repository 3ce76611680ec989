//! Point estimators of integrated variance and quarticity.
//!
//! Return-based: realized variance [`rv`] and realized quarticity [`rq`].
//! Range-based: realized range-based variance [`rrv`] and quarticity [`rrq`],
//! each in three modes — `Asymptotic` (true ranges, asymptotic constants),
//! `Homogeneous(m)` (every interval built from m increments), and
//! `PerInterval` (each interval corrected with its own observed count, the
//! right choice for irregularly spaced ticks). [`rrv_irregular`] handles
//! irregular interval durations, where only the feasible variance changes.
//!
//! All estimators are pure functions of their inputs and use compensated
//! summation: a trading day of thousands of tiny squared increments is
//! exactly the setting where naive accumulation sheds digits.

use crate::error::{Error, Result};
use crate::moments::LambdaTable;
use crate::numeric::CompensatedSum;

/// Per-interval observed ranges for one measurement horizon (one "day").
///
/// Invariants enforced at construction: lists share a length n >= 1, every
/// range is nonnegative, every count is at least 1, and the normalized
/// durations sum to 1 within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeSeries {
    day_id: String,
    ranges: Vec<f64>,
    counts: Vec<u32>,
    durations: Vec<f64>,
}

impl RangeSeries {
    pub fn new(
        day_id: impl Into<String>,
        ranges: Vec<f64>,
        counts: Vec<u32>,
        durations: Vec<f64>,
    ) -> Result<Self> {
        if ranges.is_empty() || ranges.len() != counts.len() || ranges.len() != durations.len() {
            return Err(Error::InvalidInput(format!(
                "range series needs equal-length nonempty lists, got {}/{}/{}",
                ranges.len(),
                counts.len(),
                durations.len()
            )));
        }
        if ranges.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::InvalidInput("ranges must be nonnegative".into()));
        }
        if counts.iter().any(|&m| m == 0) {
            return Err(Error::InvalidInput(
                "interval counts must be >= 1 (empty intervals take the documented m = 1 fallback)"
                    .into(),
            ));
        }
        check_durations(&durations)?;
        Ok(Self {
            day_id: day_id.into(),
            ranges,
            counts,
            durations,
        })
    }

    /// Equidistant day: durations 1/n each.
    pub fn equidistant(
        day_id: impl Into<String>,
        ranges: Vec<f64>,
        counts: Vec<u32>,
    ) -> Result<Self> {
        let n = ranges.len();
        Self::new(day_id, ranges, counts, equal_durations(n))
    }

    pub fn day_id(&self) -> &str {
        &self.day_id
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }
}

/// Per-interval log returns for one day.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    day_id: String,
    returns: Vec<f64>,
    durations: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(day_id: impl Into<String>, returns: Vec<f64>, durations: Vec<f64>) -> Result<Self> {
        if returns.is_empty() || returns.len() != durations.len() {
            return Err(Error::InvalidInput(format!(
                "return series needs equal-length nonempty lists, got {}/{}",
                returns.len(),
                durations.len()
            )));
        }
        check_durations(&durations)?;
        Ok(Self {
            day_id: day_id.into(),
            returns,
            durations,
        })
    }

    pub fn equidistant(day_id: impl Into<String>, returns: Vec<f64>) -> Result<Self> {
        let n = returns.len();
        Self::new(day_id, returns, equal_durations(n))
    }

    pub fn day_id(&self) -> &str {
        &self.day_id
    }

    pub fn len(&self) -> usize {
        self.returns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.returns.is_empty()
    }

    pub fn returns(&self) -> &[f64] {
        &self.returns
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }
}

fn equal_durations(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

fn check_durations(durations: &[f64]) -> Result<()> {
    if durations.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::InvalidInput("durations must be positive".into()));
    }
    let mut sum = CompensatedSum::new();
    for d in durations {
        sum.add(*d);
    }
    let total = sum.total();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "durations must sum to 1 (the normalized day), got {total}"
        )));
    }
    Ok(())
}

/// Normalization mode for the range-based estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrvMode {
    /// Divide by the asymptotic constants; correct when ranges are true
    /// (continuously observed) ranges.
    Asymptotic,
    /// Divide by lambda_{r,m} for one shared observation count.
    Homogeneous(u32),
    /// Divide each interval by lambda_{r,m_i} with its own observed count.
    PerInterval,
}

/// Realized variance: the sum of squared interval returns.
pub fn rv(rs: &ReturnSeries) -> f64 {
    let mut sum = CompensatedSum::new();
    for r in rs.returns() {
        sum.add(r * r);
    }
    sum.total()
}

/// Realized quarticity, (n/3) * sum of fourth powers of returns.
pub fn rq(rs: &ReturnSeries) -> f64 {
    let mut sum = CompensatedSum::new();
    for r in rs.returns() {
        let r2 = r * r;
        sum.add(r2 * r2);
    }
    rs.len() as f64 * sum.total() / 3.0
}

/// Realized range-based variance: normalized sum of squared ranges.
pub fn rrv(rs: &RangeSeries, table: &LambdaTable, mode: RrvMode) -> Result<f64> {
    match mode {
        RrvMode::Asymptotic => Ok(sum_power(rs.ranges(), 2).total() / table.lambda_asymptotic(2)?),
        RrvMode::Homogeneous(m) => Ok(sum_power(rs.ranges(), 2).total() / table.lambda(2, m)?),
        RrvMode::PerInterval => {
            let mut sum = CompensatedSum::new();
            for (s, &m) in rs.ranges().iter().zip(rs.counts()) {
                sum.add(s * s / table.lambda(2, m)?);
            }
            Ok(sum.total())
        }
    }
}

/// Realized range-based quarticity: n times the normalized sum of fourth
/// powers of ranges; consistent for the integrated quarticity.
pub fn rrq(rs: &RangeSeries, table: &LambdaTable, mode: RrvMode) -> Result<f64> {
    let n = rs.len() as f64;
    match mode {
        RrvMode::Asymptotic => {
            Ok(n * sum_power(rs.ranges(), 4).total() / table.lambda_asymptotic(4)?)
        }
        RrvMode::Homogeneous(m) => Ok(n * sum_power(rs.ranges(), 4).total() / table.lambda(4, m)?),
        RrvMode::PerInterval => {
            let mut sum = CompensatedSum::new();
            for (s, &m) in rs.ranges().iter().zip(rs.counts()) {
                let s2 = s * s;
                sum.add(s2 * s2 / table.lambda(4, m)?);
            }
            Ok(n * sum.total())
        }
    }
}

/// Range-based estimate under irregular interval durations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrregularEstimate {
    /// The point estimate; the formula is unchanged by irregular spacing.
    pub estimate: f64,
    /// Consistent estimator of the duration-weighted quarticity that appears
    /// in the irregular-sampling variance (for equidistant subdivisions it
    /// coincides with the asymptotic-mode quarticity).
    pub quarticity: f64,
}

/// RRV for irregularly spaced intervals: durations only matter for the
/// feasible variance, which the second output delivers.
pub fn rrv_irregular(rs: &RangeSeries, table: &LambdaTable) -> Result<IrregularEstimate> {
    Ok(IrregularEstimate {
        estimate: rrv(rs, table, RrvMode::Asymptotic)?,
        quarticity: rrq(rs, table, RrvMode::Asymptotic)?,
    })
}

/// The feasible asymptotic variance of sqrt(n)(RRV - IV), split into a
/// variance factor and a quarticity so the inference layer can report both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleVariance {
    pub variance_factor: f64,
    pub quarticity: f64,
}

impl FeasibleVariance {
    pub fn product(&self) -> f64 {
        self.variance_factor * self.quarticity
    }
}

/// Feasible variance for [`rrv`] under each mode.
///
/// Homogeneous and asymptotic modes return (Lambda_m, RRQ_m) and
/// (Lambda, RRQ). The per-interval mode returns the blockwise estimate
/// n * sum Lambda_{m_i} s_i^4 / lambda_{4,m_i} with a unit variance factor;
/// it reduces to Lambda_m * RRQ_m when all counts agree.
pub fn rrv_feasible_variance(
    rs: &RangeSeries,
    table: &LambdaTable,
    mode: RrvMode,
) -> Result<FeasibleVariance> {
    match mode {
        RrvMode::Asymptotic => Ok(FeasibleVariance {
            variance_factor: table.variance_factor_asymptotic()?.value,
            quarticity: rrq(rs, table, mode)?,
        }),
        RrvMode::Homogeneous(m) => Ok(FeasibleVariance {
            variance_factor: table.variance_factor_at(m)?.value,
            quarticity: rrq(rs, table, mode)?,
        }),
        RrvMode::PerInterval => {
            let mut sum = CompensatedSum::new();
            for (s, &m) in rs.ranges().iter().zip(rs.counts()) {
                let s2 = s * s;
                let factor = table.variance_factor_at(m)?.value;
                sum.add(factor * s2 * s2 / table.lambda(4, m)?);
            }
            Ok(FeasibleVariance {
                variance_factor: 1.0,
                quarticity: rs.len() as f64 * sum.total(),
            })
        }
    }
}

/// Max minus min of `prices[from..=to]`, single pass.
pub fn range_of_block(prices: &[f64], from: usize, to: usize) -> Result<f64> {
    if from > to || to >= prices.len() {
        return Err(Error::InvalidInput(format!(
            "empty or out-of-bounds block [{from}, {to}] over {} prices",
            prices.len()
        )));
    }
    let mut max = prices[from];
    let mut min = prices[from];
    for &p in &prices[from + 1..=to] {
        if p > max {
            max = p;
        } else if p < min {
            min = p;
        }
    }
    Ok(max - min)
}

fn sum_power(values: &[f64], power: u32) -> CompensatedSum {
    let mut sum = CompensatedSum::new();
    match power {
        2 => {
            for v in values {
                sum.add(v * v);
            }
        }
        4 => {
            for v in values {
                let v2 = v * v;
                sum.add(v2 * v2);
            }
        }
        _ => unreachable!("only squared and fourth powers are summed"),
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{LambdaTable, LAMBDA_2, LAMBDA_4};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn table() -> &'static LambdaTable {
        static TABLE: OnceLock<LambdaTable> = OnceLock::new();
        TABLE.get_or_init(|| LambdaTable::build(&[1, 2, 4, 10], 20_000, 8).unwrap())
    }

    #[test]
    fn rv_on_small_examples() {
        let rs = ReturnSeries::equidistant("d", vec![0.01, -0.02, 0.01]).unwrap();
        assert_relative_eq!(rv(&rs), 0.0006, max_relative = 1e-12);
        let zero = ReturnSeries::equidistant("d", vec![0.0, 0.0]).unwrap();
        assert_eq!(rv(&zero), 0.0);
        assert_eq!(rq(&zero), 0.0);
    }

    #[test]
    fn rq_on_small_examples() {
        let rs = ReturnSeries::equidistant("d", vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(rq(&rs), 4.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn series_constructors_reject_bad_shapes() {
        assert!(ReturnSeries::new("d", vec![], vec![]).is_err());
        assert!(ReturnSeries::new("d", vec![1.0], vec![0.5]).is_err());
        assert!(ReturnSeries::new("d", vec![1.0, 1.0], vec![0.5]).is_err());
        assert!(RangeSeries::new("d", vec![-1.0], vec![1], vec![1.0]).is_err());
        assert!(RangeSeries::new("d", vec![1.0], vec![0], vec![1.0]).is_err());
        assert!(RangeSeries::new("d", vec![1.0, 1.0], vec![1, 1], vec![0.7, 0.2]).is_err());
    }

    #[test]
    fn rrv_asymptotic_single_interval() {
        let rs = RangeSeries::equidistant("d", vec![2.0], vec![1]).unwrap();
        let got = rrv(&rs, table(), RrvMode::Asymptotic).unwrap();
        assert_relative_eq!(got, 4.0 / LAMBDA_2, max_relative = 1e-15);
    }

    #[test]
    fn rrq_asymptotic_single_interval() {
        let rs = RangeSeries::equidistant("d", vec![1.0], vec![1]).unwrap();
        let got = rrq(&rs, table(), RrvMode::Asymptotic).unwrap();
        assert_relative_eq!(got, 1.0 / LAMBDA_4, max_relative = 1e-15);
    }

    #[test]
    fn m_one_collapses_to_return_based_estimators() {
        // One increment per interval: ranges are absolute returns and the
        // m = 1 constants are exact, so the estimators coincide bit-for-bit.
        let returns: Vec<f64> = vec![0.013, -0.042, 0.0071, 0.0, -0.0099];
        let ranges: Vec<f64> = returns.iter().map(|r| r.abs()).collect();
        let counts = vec![1; returns.len()];
        let rets = ReturnSeries::equidistant("d", returns).unwrap();
        let rngs = RangeSeries::equidistant("d", ranges, counts).unwrap();
        assert_eq!(
            rrv(&rngs, table(), RrvMode::Homogeneous(1)).unwrap(),
            rv(&rets)
        );
        assert_eq!(
            rrq(&rngs, table(), RrvMode::Homogeneous(1)).unwrap(),
            rq(&rets)
        );
    }

    #[test]
    fn per_interval_reduces_to_homogeneous_for_constant_counts() {
        let rs = RangeSeries::equidistant("d", vec![0.4, 0.2, 0.3], vec![10, 10, 10]).unwrap();
        let a = rrv(&rs, table(), RrvMode::PerInterval).unwrap();
        let b = rrv(&rs, table(), RrvMode::Homogeneous(10)).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
        let fa = rrv_feasible_variance(&rs, table(), RrvMode::PerInterval).unwrap();
        let fb = rrv_feasible_variance(&rs, table(), RrvMode::Homogeneous(10)).unwrap();
        assert_relative_eq!(fa.product(), fb.product(), max_relative = 1e-14);
    }

    #[test]
    fn missing_count_is_named() {
        let rs = RangeSeries::equidistant("d", vec![0.4], vec![64]).unwrap();
        match rrv(&rs, table(), RrvMode::PerInterval) {
            Err(crate::Error::MissingLambda { r: 2, m: 64 }) => {}
            other => panic!("expected MissingLambda for m=64, got {other:?}"),
        }
    }

    #[test]
    fn rrv_irregular_matches_asymptotic_quarticity_when_equidistant() {
        let rs =
            RangeSeries::equidistant("d", vec![0.5, 0.25, 0.125, 0.75], vec![3, 4, 5, 6]).unwrap();
        let est = rrv_irregular(&rs, table()).unwrap();
        assert_eq!(
            est.quarticity,
            rrq(&rs, table(), RrvMode::Asymptotic).unwrap()
        );
        assert_eq!(est.estimate, rrv(&rs, table(), RrvMode::Asymptotic).unwrap());
    }

    #[test]
    fn rrv_irregular_two_half_intervals() {
        let rs = RangeSeries::new("d", vec![1.0, 1.0], vec![1, 1], vec![0.5, 0.5]).unwrap();
        let est = rrv_irregular(&rs, table()).unwrap();
        assert_relative_eq!(est.estimate, 2.0 / LAMBDA_2, max_relative = 1e-15);
    }

    #[test]
    fn range_of_block_examples() {
        assert_eq!(range_of_block(&[1.0, 2.0, 3.0], 0, 2).unwrap(), 2.0);
        assert_eq!(range_of_block(&[5.0, 5.0, 5.0], 0, 2).unwrap(), 0.0);
        assert!(range_of_block(&[1.0], 1, 0).is_err());
        assert!(range_of_block(&[1.0], 0, 3).is_err());
    }

    /// Exhaustive pairwise sup oracle for the range.
    fn pairwise_range(prices: &[f64]) -> f64 {
        let mut best: f64 = 0.0;
        for a in prices {
            for b in prices {
                best = best.max(a - b);
            }
        }
        best
    }

    proptest! {
        #[test]
        fn range_matches_pairwise_oracle(prices in prop::collection::vec(-1e3..1e3f64, 1..100)) {
            let got = range_of_block(&prices, 0, prices.len() - 1).unwrap();
            prop_assert_eq!(got, pairwise_range(&prices));
        }

        #[test]
        fn rv_coincides_with_rrv_at_one_increment(
            grid in prop::collection::vec(-0.5..0.5f64, 2..80),
        ) {
            let returns: Vec<f64> = grid.windows(2).map(|w| w[1] - w[0]).collect();
            let ranges: Vec<f64> = returns.iter().map(|r| r.abs()).collect();
            let counts = vec![1u32; returns.len()];
            let rets = ReturnSeries::equidistant("p", returns).unwrap();
            let rngs = RangeSeries::equidistant("p", ranges, counts).unwrap();
            prop_assert_eq!(rrv(&rngs, table(), RrvMode::Homogeneous(1)).unwrap(), rv(&rets));
        }

        #[test]
        fn power_of_two_rescaling_is_exact(
            grid in prop::collection::vec(-0.5..0.5f64, 2..60),
            k in -8i32..9,
        ) {
            // Multiplying log prices by 2^k scales exactly in IEEE 754:
            // rv picks up c^2 and rq picks up c^4 bit-for-bit.
            let c = (2.0f64).powi(k);
            let returns: Vec<f64> = grid.windows(2).map(|w| w[1] - w[0]).collect();
            let scaled: Vec<f64> = returns.iter().map(|r| c * r).collect();
            let base = ReturnSeries::equidistant("p", returns).unwrap();
            let big = ReturnSeries::equidistant("p", scaled).unwrap();
            prop_assert_eq!(rv(&big), c * c * rv(&base));
            prop_assert_eq!(rq(&big), (c * c * c * c) * rq(&base));
        }

        #[test]
        fn general_rescaling_is_exact_to_roundoff(
            grid in prop::collection::vec(-0.5..0.5f64, 2..60),
            c in 0.1..10.0f64,
        ) {
            let prices: Vec<f64> = grid;
            let scaled: Vec<f64> = prices.iter().map(|p| c * p).collect();
            let mk = |ps: &[f64]| {
                let ranges = vec![range_of_block(ps, 0, ps.len() - 1).unwrap()];
                RangeSeries::equidistant("p", ranges, vec![1]).unwrap()
            };
            let a = rrv(&mk(&prices), table(), RrvMode::Asymptotic).unwrap();
            let b = rrv(&mk(&scaled), table(), RrvMode::Asymptotic).unwrap();
            prop_assert!((b - c * c * a).abs() <= 1e-12 * b.abs().max(1e-300));
        }

        #[test]
        fn range_dominates_endpoint_return(
            grid in prop::collection::vec(-0.5..0.5f64, 3..60),
        ) {
            // Each interval's range bounds its endpoint-to-endpoint return,
            // so lambda_2 * rrv(asymptotic) >= rv on the same partition.
            let n = 3usize;
            let per = grid.len() / n;
            let mut ranges = Vec::new();
            let mut returns = Vec::new();
            for i in 0..n {
                let lo = i * per;
                let hi = if i == n - 1 { grid.len() - 1 } else { (i + 1) * per };
                ranges.push(range_of_block(&grid, lo, hi).unwrap());
                returns.push(grid[hi] - grid[lo]);
            }
            for (s, r) in ranges.iter().zip(&returns) {
                prop_assert!(*s >= r.abs());
            }
            let rngs = RangeSeries::equidistant("p", ranges, vec![1; n]).unwrap();
            let rets = ReturnSeries::equidistant("p", returns).unwrap();
            let lhs = LAMBDA_2 * rrv(&rngs, table(), RrvMode::Asymptotic).unwrap();
            prop_assert!(lhs >= rv(&rets) - 1e-12);
        }
    }
}
