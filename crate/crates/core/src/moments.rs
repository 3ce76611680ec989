//! Moment constants of the range of Brownian motion.
//!
//! The range-based estimators divide summed squared (or fourth-powered)
//! ranges by the moments of the range of a standard Brownian motion over a
//! unit interval. Three families live here:
//!
//! * the asymptotic constants from Parkinson's formula, [`parkinson_lambda`],
//! * the discrete-sample constants for a walk observed at `m` increments,
//!   [`simulate_lambda`], for which no closed form is known,
//! * Feller's density of the range, [`feller_range_density`], used as an
//!   independent quadrature oracle for the asymptotic constants.
//!
//! Simulated constants are cached in a [`LambdaTable`], persisted as a plain
//! text file, and served with monotone interpolation in log m for
//! observation counts between grid points.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numeric::MonotoneCubic;
use crate::rng;
use crate::special::{gamma, normal_pdf, zeta};

/// lambda_2 = 4 ln 2, the second moment of the range of standard Brownian
/// motion. Hard-coded limit of the Parkinson formula at its removable
/// singularity.
pub const LAMBDA_2: f64 = 2.772588722239781;

/// Apery's constant zeta(3).
const ZETA_3: f64 = 1.2020569031595943;

/// lambda_4 = 9 zeta(3), the fourth moment of the range.
pub const LAMBDA_4: f64 = 9.0 * ZETA_3;

/// Stream tag for the discrete range walks (fixed; part of the cache format).
const RANGE_WALK_STREAM: u64 = 1;

/// Asymptotic moment of the range of standard Brownian motion over a unit
/// interval: lambda_r = (4/sqrt(pi)) (1 - 4/2^r) 2^(r/2) Gamma((r+1)/2)
/// zeta(r-1), for r >= 1.
///
/// At r = 2 the factor (1 - 4/2^r) zeta(r-1) is a 0 * inf indeterminate form;
/// the analytic limit 4 ln 2 is returned instead (and 9 zeta(3) at r = 4, for
/// exactness). At r = 1 the formula applies with zeta(0) = -1/2.
pub fn parkinson_lambda(r: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::Domain(format!(
            "range moments are defined for order r >= 1, got {r}"
        )));
    }
    if (r - 2.0).abs() < 1e-9 {
        return Ok(LAMBDA_2);
    }
    if r == 4.0 {
        return Ok(LAMBDA_4);
    }
    let four_over_sqrt_pi = 4.0 / std::f64::consts::PI.sqrt();
    let value = four_over_sqrt_pi
        * (1.0 - 4.0 / 2.0_f64.powf(r))
        * 2.0_f64.powf(r / 2.0)
        * gamma((r + 1.0) / 2.0)?
        * zeta(r - 1.0)?;
    Ok(value)
}

/// The variance factor of the range-based central limit theory,
/// (lambda_4 - lambda_2^2) / lambda_2^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceFactor {
    pub lambda2: f64,
    pub lambda4: f64,
    pub value: f64,
}

/// Build the variance factor from the second and fourth moments.
///
/// Rejects lambda4 <= lambda2^2: the inequality is strict for any
/// nondegenerate range distribution, so equality signals a corrupted table.
pub fn variance_factor(lambda2: f64, lambda4: f64) -> Result<VarianceFactor> {
    if !(lambda2 > 0.0) || !lambda4.is_finite() {
        return Err(Error::Domain(format!(
            "variance factor needs lambda2 > 0 and finite lambda4, got ({lambda2}, {lambda4})"
        )));
    }
    if lambda4 <= lambda2 * lambda2 {
        return Err(Error::Domain(format!(
            "lambda4 = {lambda4} must exceed lambda2^2 = {}; degenerate or corrupted moments",
            lambda2 * lambda2
        )));
    }
    Ok(VarianceFactor {
        lambda2,
        lambda4,
        value: lambda4 / (lambda2 * lambda2) - 1.0,
    })
}

/// Feller's density of the range of Brownian motion over an interval of
/// length `delta`, evaluated at `x`:
///
/// f(x) = 8 sum_{j>=1} (-1)^(j-1) (j^2 / sqrt(delta)) phi(j x / sqrt(delta)).
///
/// The alternating series is truncated when the next term drops below
/// `tol` times the magnitude of the running sum, with a floor of three terms
/// so small-x evaluations do not stop prematurely. Below x/sqrt(delta) =
/// 0.15 the true density is smaller than 1e-90 while the series terms are
/// O(10), so the cancellation noise dominates any partial sum; 0 is returned
/// there.
pub fn feller_range_density(x: f64, delta: f64, tol: f64) -> Result<f64> {
    if !(x > 0.0) || !(delta > 0.0) {
        return Err(Error::Domain(format!(
            "range density needs x > 0 and delta > 0, got ({x}, {delta})"
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance must be in (0, 1), got {tol}")));
    }
    let sqrt_delta = delta.sqrt();
    let u = x / sqrt_delta;
    if u < 0.15 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    let mut j = 1u32;
    loop {
        let jf = f64::from(j);
        let term = jf * jf * normal_pdf(jf * u);
        sum += if j % 2 == 1 { term } else { -term };
        let next = {
            let jf = f64::from(j + 1);
            jf * jf * normal_pdf(jf * u)
        };
        if j >= 3 && next < tol * sum.abs() {
            break;
        }
        if j > 10_000 {
            return Err(Error::Numeric(format!(
                "range density series did not converge at x={x}, delta={delta}"
            )));
        }
        j += 1;
    }
    Ok((8.0 * sum / sqrt_delta).max(0.0))
}

/// A Monte Carlo point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Accumulated per-path statistics of the discrete range walks. One stream
/// per (m, block), shared by every consumer so that results for equal
/// (m, paths, seed) are bit-identical no matter which moments are read.
#[derive(Debug, Clone, Copy, Default)]
struct WalkSums {
    n: u64,
    s1: f64,
    s2: f64,
    s4: f64,
    s8: f64,
    e2: f64,
    e4: f64,
    e2s2: f64,
    e4s2: f64,
    e2s4: f64,
    e4s4: f64,
}

impl WalkSums {
    fn merge(mut self, other: &WalkSums) -> WalkSums {
        self.n += other.n;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s4 += other.s4;
        self.s8 += other.s8;
        self.e2 += other.e2;
        self.e4 += other.e4;
        self.e2s2 += other.e2s2;
        self.e4s2 += other.e4s2;
        self.e2s4 += other.e2s4;
        self.e4s4 += other.e4s4;
        self
    }

    /// Sample mean and standard error of range^r for r in {1, 2, 4}.
    fn moment(&self, r: u32) -> Result<MonteCarloEstimate> {
        let (sum, sum_sq) = match r {
            1 => (self.s1, self.s2),
            2 => (self.s2, self.s4),
            4 => (self.s4, self.s8),
            _ => {
                return Err(Error::Domain(format!(
                    "walk sums track orders 1, 2, 4 only, got {r}"
                )))
            }
        };
        let n = self.n as f64;
        let mean = sum / n;
        let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
        Ok(MonteCarloEstimate {
            value: mean,
            std_error: (var / n).sqrt(),
        })
    }
}

fn walk_block(rng: &mut ChaCha8Rng, count: u64, m: u32) -> WalkSums {
    let scale = 1.0 / f64::from(m).sqrt();
    let mut acc = WalkSums::default();
    for _ in 0..count {
        let mut cum = 0.0;
        let mut max = 0.0;
        let mut min = 0.0;
        for _ in 0..m {
            let z: f64 = rng.sample(StandardNormal);
            cum += z * scale;
            if cum > max {
                max = cum;
            } else if cum < min {
                min = cum;
            }
        }
        let s = max - min;
        let s2 = s * s;
        let s4 = s2 * s2;
        let e2 = cum * cum;
        let e4 = e2 * e2;
        acc.n += 1;
        acc.s1 += s;
        acc.s2 += s2;
        acc.s4 += s4;
        acc.s8 += s4 * s4;
        acc.e2 += e2;
        acc.e4 += e4;
        acc.e2s2 += e2 * s2;
        acc.e4s2 += e4 * s2;
        acc.e2s4 += e2 * s4;
        acc.e4s4 += e4 * s4;
    }
    acc
}

fn simulate_walks(m: u32, paths: u64, seed: u64) -> Result<WalkSums> {
    if m == 0 {
        return Err(Error::Domain("observation count m must be positive".into()));
    }
    if paths < 1000 {
        return Err(Error::Domain(format!(
            "at least 1000 paths are required for a usable standard error, got {paths}"
        )));
    }
    let blocks = rng::par_blocks(paths, seed, &[RANGE_WALK_STREAM, u64::from(m)], |r, count| {
        walk_block(r, count, m)
    });
    Ok(blocks
        .iter()
        .fold(WalkSums::default(), |acc, b| acc.merge(b)))
}

/// Simulate the r-th moment of the range of a standard Brownian motion over a
/// unit interval observed at `m` increments (m+1 equidistant grid points
/// including both endpoints).
///
/// Only r in {1, 2, 4} are accepted; these are the orders consumed by the
/// estimators. See [`simulate_lambda_extended`] for other orders.
/// Deterministic for fixed (r, m, paths, seed) and independent of the number
/// of worker threads.
pub fn simulate_lambda(r: u32, m: u32, paths: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if !matches!(r, 1 | 2 | 4) {
        return Err(Error::Domain(format!(
            "moment order {r} is not consumed downstream; use simulate_lambda_extended"
        )));
    }
    simulate_walks(m, paths, seed)?.moment(r)
}

/// As [`simulate_lambda`], for any integer order r >= 1. Orders outside
/// {1, 2, 4} run a dedicated accumulation pass.
pub fn simulate_lambda_extended(
    r: u32,
    m: u32,
    paths: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if matches!(r, 1 | 2 | 4) {
        return simulate_lambda(r, m, paths, seed);
    }
    if r == 0 {
        return Err(Error::Domain("moment order must be >= 1".into()));
    }
    if paths < 1000 {
        return Err(Error::Domain(format!(
            "at least 1000 paths are required for a usable standard error, got {paths}"
        )));
    }
    let blocks = rng::par_blocks(paths, seed, &[RANGE_WALK_STREAM, u64::from(m)], |g, count| {
        let scale = 1.0 / f64::from(m).sqrt();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..count {
            let mut cum = 0.0;
            let mut max = 0.0;
            let mut min = 0.0;
            for _ in 0..m {
                let z: f64 = g.sample(StandardNormal);
                cum += z * scale;
                if cum > max {
                    max = cum;
                } else if cum < min {
                    min = cum;
                }
            }
            let v = (max - min).powi(r as i32);
            sum += v;
            sum_sq += v * v;
        }
        (count, sum, sum_sq)
    });
    let (n, sum, sum_sq) = blocks.iter().fold((0u64, 0.0, 0.0), |a, b| {
        (a.0 + b.0, a.1 + b.1, a.2 + b.2)
    });
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        value: mean,
        std_error: (var / nf).sqrt(),
    })
}

/// Monte Carlo estimate of cov(W_1^2, s_{W,m}^2) / lambda_{2,m}: the
/// off-diagonal element of the conditional covariance matrix of the joint
/// return/range limit theory. Uses the same walk streams as
/// [`simulate_lambda`]; W_1 is the final grid point of each walk.
///
/// The standard error is first-order (delta method on the covariance; the
/// lambda_{2,m} denominator contributes at second order).
pub fn simulate_joint_covariance(m: u32, paths: u64, seed: u64) -> Result<MonteCarloEstimate> {
    let w = simulate_walks(m, paths, seed)?;
    let n = w.n as f64;
    let mean_e2 = w.e2 / n;
    let mean_s2 = w.s2 / n;
    let cov = (w.e2s2 / n - mean_e2 * mean_s2) * n / (n - 1.0);
    // var of the influence function (x - mu_x)(y - mu_y), x = W_1^2, y = s^2.
    let exxyy = w.e4s4 / n;
    let exxy = w.e4s2 / n;
    let exyy = w.e2s4 / n;
    let exx = w.e4 / n;
    let eyy = w.s4 / n;
    let exy = w.e2s2 / n;
    let central = exxyy - 2.0 * mean_s2 * exxy - 2.0 * mean_e2 * exyy
        + mean_s2 * mean_s2 * exx
        + mean_e2 * mean_e2 * eyy
        + 4.0 * mean_e2 * mean_s2 * exy
        - 3.0 * mean_e2 * mean_e2 * mean_s2 * mean_s2;
    let var_cov = ((central - cov * cov) / n).max(0.0);
    Ok(MonteCarloEstimate {
        value: cov / mean_s2,
        std_error: var_cov.sqrt() / mean_s2,
    })
}

/// Observation count key of a table entry: a finite m or the asymptotic
/// (fully observed) value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ObsCount {
    Finite(u32),
    Asymptotic,
}

/// One cached moment constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEntry {
    pub value: f64,
    pub std_error: f64,
    /// Replications used for the entry; 0 marks an analytic (exact) value.
    pub paths: u64,
}

/// Cached moment constants lambda_{r,m} for r in {2, 4} over a grid of
/// observation counts, plus the asymptotic values.
///
/// Off-grid lookups interpolate monotone-cubically in (ln m, lambda), which
/// tracks the smooth, monotone shape of the constants on a log scale.
/// Lookups outside the grid range fail rather than extrapolate. Construction
/// is deterministic for fixed (grid, paths, seed); the table is read-only
/// and freely shareable afterwards.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    entries: BTreeMap<(u32, ObsCount), LambdaEntry>,
    rng_seed: u64,
    paths: u64,
    created_at: u64,
    interp: BTreeMap<u32, MonotoneCubic>,
}

impl LambdaTable {
    /// The default grid: every divisor of 23,400 up to 1,800 plus the powers
    /// of two up to 2^14, covering empirically relevant per-interval counts.
    pub fn default_grid() -> Vec<u32> {
        let mut grid: Vec<u32> = (1..=1800).filter(|m| 23_400 % m == 0).collect();
        let mut p = 1u32;
        while p <= 1 << 14 {
            grid.push(p);
            p *= 2;
        }
        grid.sort_unstable();
        grid.dedup();
        grid
    }

    /// Simulate and cache lambda_{r,m} for r in {2, 4} at every m in the
    /// grid, and attach the analytic asymptotic entries. The m = 1 entries
    /// are stored exactly (the range over one increment is |N(0,1)|, whose
    /// second and fourth moments are 1 and 3); this is what makes the
    /// range-based estimators collapse to RV/RQ bit-for-bit at m = 1.
    pub fn build(m_grid: &[u32], paths: u64, seed: u64) -> Result<Self> {
        if m_grid.is_empty() {
            return Err(Error::InvalidInput("table grid must be nonempty".into()));
        }
        if m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "table grid must be sorted and distinct".into(),
            ));
        }
        if m_grid[0] == 0 {
            return Err(Error::InvalidInput("observation counts start at 1".into()));
        }
        let mut entries = BTreeMap::new();
        for &m in m_grid {
            if m == 1 {
                for (r, value) in [(2u32, 1.0), (4u32, 3.0)] {
                    entries.insert(
                        (r, ObsCount::Finite(1)),
                        LambdaEntry {
                            value,
                            std_error: 0.0,
                            paths: 0,
                        },
                    );
                }
                continue;
            }
            let sums = simulate_walks(m, paths, seed)?;
            for r in [2u32, 4u32] {
                let est = sums.moment(r)?;
                entries.insert(
                    (r, ObsCount::Finite(m)),
                    LambdaEntry {
                        value: est.value,
                        std_error: est.std_error,
                        paths,
                    },
                );
            }
        }
        for r in [2u32, 4u32] {
            entries.insert(
                (r, ObsCount::Asymptotic),
                LambdaEntry {
                    value: parkinson_lambda(f64::from(r))?,
                    std_error: 0.0,
                    paths: 0,
                },
            );
        }
        let mut table = LambdaTable {
            entries,
            rng_seed: seed,
            paths,
            created_at: unix_now(),
            interp: BTreeMap::new(),
        };
        table.validate()?;
        table.rebuild_interpolants();
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        for ((r, m), e) in &self.entries {
            if !(e.value > 0.0) || !(e.std_error >= 0.0) {
                return Err(Error::Numeric(format!(
                    "corrupt table entry at r={r}, m={m:?}: value {} std_error {}",
                    e.value, e.std_error
                )));
            }
        }
        Ok(())
    }

    fn rebuild_interpolants(&mut self) {
        self.interp.clear();
        for r in [2u32, 4u32] {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for ((er, m), e) in &self.entries {
                if *er == r {
                    if let ObsCount::Finite(m) = m {
                        xs.push(f64::from(*m).ln());
                        ys.push(e.value);
                    }
                }
            }
            if !xs.is_empty() {
                self.interp.insert(r, MonotoneCubic::new(xs, ys));
            }
        }
    }

    /// Seed the table was simulated with.
    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    /// Replications requested when the table was built.
    pub fn paths(&self) -> u64 {
        self.paths
    }

    /// Creation time, seconds since the Unix epoch.
    pub fn created_at(&self) -> u64 {
        self.created_at
    }

    /// Raw entry access.
    pub fn entry(&self, r: u32, m: ObsCount) -> Option<&LambdaEntry> {
        self.entries.get(&(r, m))
    }

    /// Iterate entries in (r, m) order.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, ObsCount), &LambdaEntry)> {
        self.entries.iter()
    }

    /// The moment constant for order `r` at `m` observed increments. Exact
    /// grid hits return the cached value; other m interpolate in log m.
    /// m outside the grid range is an error naming the absent count.
    pub fn lambda(&self, r: u32, m: u32) -> Result<f64> {
        if let Some(e) = self.entries.get(&(r, ObsCount::Finite(m))) {
            return Ok(e.value);
        }
        let interp = self.interp.get(&r).ok_or(Error::MissingLambda { r, m })?;
        let x = f64::from(m).ln();
        if m == 0 || !interp.covers(x) {
            return Err(Error::MissingLambda { r, m });
        }
        Ok(interp.eval(x))
    }

    /// The asymptotic (fully observed) constant for order `r`.
    pub fn lambda_asymptotic(&self, r: u32) -> Result<f64> {
        self.entries
            .get(&(r, ObsCount::Asymptotic))
            .map(|e| e.value)
            .ok_or(Error::MissingLambda { r, m: 0 })
    }

    /// Variance factor Lambda_m at a finite observation count.
    pub fn variance_factor_at(&self, m: u32) -> Result<VarianceFactor> {
        variance_factor(self.lambda(2, m)?, self.lambda(4, m)?)
    }

    /// Asymptotic variance factor Lambda.
    pub fn variance_factor_asymptotic(&self) -> Result<VarianceFactor> {
        variance_factor(self.lambda_asymptotic(2)?, self.lambda_asymptotic(4)?)
    }

    /// Serialize to the cache format: a version/seed/paths header line, a
    /// creation-time line, a column header, and one `r,m,value,std_error,
    /// paths` row per entry with the asymptotic entries encoded as m = 0.
    pub fn to_string_form(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# range-vol lambda table v1 seed={} paths={}",
            self.rng_seed, self.paths
        );
        let _ = writeln!(out, "# created {}", self.created_at);
        let _ = writeln!(out, "r,m,value,std_error,paths");
        for ((r, m), e) in &self.entries {
            let m_code = match m {
                ObsCount::Asymptotic => 0,
                ObsCount::Finite(m) => *m,
            };
            let _ = writeln!(out, "{},{},{},{},{}", r, m_code, e.value, e.std_error, e.paths);
        }
        out
    }

    /// Write the cache file. I/O failures surface as [`Error::Io`], distinct
    /// from the simulation errors raised while building.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_string_form().as_bytes())?;
        Ok(())
    }

    /// Parse the cache format produced by [`LambdaTable::to_string_form`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut rng_seed = 0u64;
        let mut paths = 0u64;
        let mut created_at = 0u64;
        let mut entries = BTreeMap::new();
        let mut saw_version = false;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(meta) = rest.strip_prefix("range-vol lambda table v1") {
                    saw_version = true;
                    for kv in meta.split_whitespace() {
                        if let Some(v) = kv.strip_prefix("seed=") {
                            rng_seed = v
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad seed in header: {kv}")))?;
                        } else if let Some(v) = kv.strip_prefix("paths=") {
                            paths = v
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad paths in header: {kv}")))?;
                        }
                    }
                } else if let Some(v) = rest.strip_prefix("created ") {
                    created_at = v
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad created line: {line}")))?;
                }
                continue;
            }
            if line.starts_with("r,") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Parse(format!("bad table row: {line}")));
            }
            let r: u32 = fields[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad r in row: {line}")))?;
            let m_code: u32 = fields[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad m in row: {line}")))?;
            let value: f64 = fields[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad value in row: {line}")))?;
            let std_error: f64 = fields[3]
                .parse()
                .map_err(|_| Error::Parse(format!("bad std_error in row: {line}")))?;
            let row_paths: u64 = fields[4]
                .parse()
                .map_err(|_| Error::Parse(format!("bad paths in row: {line}")))?;
            let m = if m_code == 0 {
                ObsCount::Asymptotic
            } else {
                ObsCount::Finite(m_code)
            };
            entries.insert(
                (r, m),
                LambdaEntry {
                    value,
                    std_error,
                    paths: row_paths,
                },
            );
        }
        if !saw_version {
            return Err(Error::Parse(
                "missing 'range-vol lambda table v1' header line".into(),
            ));
        }
        if entries.is_empty() {
            return Err(Error::Parse("lambda table has no entries".into()));
        }
        let mut table = LambdaTable {
            entries,
            rng_seed,
            paths,
            created_at,
            interp: BTreeMap::new(),
        };
        table.validate()?;
        table.rebuild_interpolants();
        Ok(table)
    }

    /// Read a cache file.
    pub fn load(path: &Path) -> Result<Self> {
        let mut text = String::new();
        let mut reader = BufReader::new(std::fs::File::open(path)?);
        let mut line = String::new();
        while reader.read_line(&mut line)? > 0 {
            text.push_str(&line);
            line.clear();
        }
        Self::parse(&text)
    }
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
