//! Ground-truth path generators.
//!
//! Two models: scaled Brownian motion (constant sigma) and a stochastic
//! volatility model where the log variance follows a mean-reverting
//! Ornstein-Uhlenbeck process driven independently of the price:
//!
//! d p_t = sigma_t dW_t,    d ln sigma_t^2 = theta (omega - ln sigma_t^2) dt + eta dB_t.
//!
//! The day is the unit interval. The log variance advances by its exact
//! transition over each fine substep; the price advances by an Euler step
//! with sigma held constant within the substep. With `substeps = 1` the fine
//! grid is exactly the mn returns the estimators see; larger values refine
//! the ground-truth integrated variance without changing the observed grid.
//! Every day is reproducible from (scenario, day_index) alone.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::estimators::{range_of_block, RangeSeries, ReturnSeries};
use crate::numeric::CompensatedSum;
use crate::rng::substream;

/// Stream tag for simulated days (fixed; part of the reproducibility
/// contract).
const DAY_STREAM: u64 = 2;

/// Parameters of the stochastic volatility experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SvScenario {
    /// Mean reversion speed of ln sigma^2 (per day).
    pub theta: f64,
    /// Long-run mean of ln sigma^2.
    pub omega: f64,
    /// Volatility of ln sigma^2.
    pub eta: f64,
    /// Returns per day on the observed grid.
    pub mn: u32,
    /// Intervals per day.
    pub n: u32,
    /// Increments per interval; m * n = mn.
    pub m: u32,
    /// Fine steps per observed return for the ground truth.
    pub substeps: u32,
    pub seed: u64,
    pub days: u32,
}

impl SvScenario {
    /// The calibrated parameter vector used throughout the Monte Carlo
    /// studies: (theta, omega, eta) = (0.032, -0.631, 0.115).
    pub fn calibrated(mn: u32, n: u32, seed: u64, days: u32) -> Result<Self> {
        Self::new(0.032, -0.631, 0.115, mn, n, 1, seed, days)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theta: f64,
        omega: f64,
        eta: f64,
        mn: u32,
        n: u32,
        substeps: u32,
        seed: u64,
        days: u32,
    ) -> Result<Self> {
        if !(theta > 0.0) || !omega.is_finite() || !(eta >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "need theta > 0, finite omega, eta >= 0; got ({theta}, {omega}, {eta})"
            )));
        }
        if n == 0 || mn == 0 || mn % n != 0 {
            return Err(Error::InvalidInput(format!(
                "interval count n = {n} must divide the returns per day mn = {mn}"
            )));
        }
        if substeps == 0 {
            return Err(Error::InvalidInput("substeps must be >= 1".into()));
        }
        if days == 0 {
            return Err(Error::InvalidInput("day count must be >= 1".into()));
        }
        Ok(SvScenario {
            theta,
            omega,
            eta,
            mn,
            n,
            m: mn / n,
            substeps,
            seed,
            days,
        })
    }
}

/// One simulated trading day: the observed log-price grid, the fine-grid
/// spot variance, and the realized integrated variance/quarticity that serve
/// as the ground truth for coverage experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedDay {
    pub day_id: String,
    /// mn + 1 log prices including both endpoints.
    pub prices: Vec<f64>,
    /// sigma^2 at the left endpoint of each fine substep.
    pub spot_var: Vec<f64>,
    /// Left-point Riemann sum of sigma^2 at substep resolution.
    pub true_iv: f64,
    /// Left-point Riemann sum of sigma^4 at substep resolution.
    pub true_iq: f64,
}

impl SimulatedDay {
    /// Split the day into n intervals of m increments each and extract the
    /// observed per-interval ranges (both boundary points included).
    pub fn range_series(&self, n: u32, m: u32) -> Result<RangeSeries> {
        let mn = (self.prices.len() - 1) as u32;
        if n == 0 || m == 0 || n * m != mn {
            return Err(Error::InvalidInput(format!(
                "day has {mn} returns; cannot split into {n} intervals of {m}"
            )));
        }
        let m_us = m as usize;
        let mut ranges = Vec::with_capacity(n as usize);
        for i in 0..n as usize {
            ranges.push(range_of_block(&self.prices, i * m_us, (i + 1) * m_us)?);
        }
        RangeSeries::equidistant(self.day_id.clone(), ranges, vec![m; n as usize])
    }

    /// Interval returns at sampling frequency n.
    pub fn return_series(&self, n: u32) -> Result<ReturnSeries> {
        let mn = (self.prices.len() - 1) as u32;
        if n == 0 || mn % n != 0 {
            return Err(Error::InvalidInput(format!(
                "day has {mn} returns; {n} intervals do not tile them"
            )));
        }
        let stride = (mn / n) as usize;
        let returns: Vec<f64> = (0..n as usize)
            .map(|i| self.prices[(i + 1) * stride] - self.prices[i * stride])
            .collect();
        ReturnSeries::equidistant(self.day_id.clone(), returns)
    }
}

/// Exact one-step transition of the OU process for ln sigma^2 over a step of
/// length `delta`: x' = omega + decay (x - omega) + noise_std Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuTransition {
    pub decay: f64,
    pub noise_std: f64,
}

pub fn ou_transition(theta: f64, eta: f64, delta: f64) -> OuTransition {
    let decay = (-theta * delta).exp();
    let var = eta * eta * (1.0 - (-2.0 * theta * delta).exp()) / (2.0 * theta);
    OuTransition {
        decay,
        noise_std: var.sqrt(),
    }
}

/// Scaled Brownian motion: increments i.i.d. N(0, sigma^2/mn). The ground
/// truth is exact: true_iv = sigma^2, true_iq = sigma^4.
pub fn simulate_constant_sigma_day(sigma: f64, mn: u32, seed: u64) -> Result<SimulatedDay> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sigma must be positive (the volatility does not vanish), got {sigma}"
        )));
    }
    if mn == 0 {
        return Err(Error::InvalidInput("need at least one return per day".into()));
    }
    let mut rng = substream(seed, &[DAY_STREAM, 0]);
    let scale = sigma / f64::from(mn).sqrt();
    let mut prices = Vec::with_capacity(mn as usize + 1);
    let mut p = 0.0;
    prices.push(p);
    for _ in 0..mn {
        let z: f64 = rng.sample(StandardNormal);
        p += scale * z;
        prices.push(p);
    }
    Ok(SimulatedDay {
        day_id: format!("bm-{seed}"),
        prices,
        spot_var: vec![sigma * sigma; mn as usize],
        true_iv: sigma * sigma,
        true_iq: sigma * sigma * sigma * sigma,
    })
}

/// One day of the stochastic volatility model, deterministic per
/// (scenario, day_index). Initial conditions: p = 0, ln sigma^2 = omega.
pub fn simulate_sv_day(scenario: &SvScenario, day_index: u32) -> SimulatedDay {
    let fine_steps = scenario.mn as usize * scenario.substeps as usize;
    let delta = 1.0 / fine_steps as f64;
    let sqrt_delta = delta.sqrt();
    let ou = ou_transition(scenario.theta, scenario.eta, delta);

    // Volatility and price draws come from sibling substreams so the two
    // Brownian motions are independent.
    let mut vol_rng = substream(scenario.seed, &[DAY_STREAM, u64::from(day_index), 0]);
    let mut price_rng = substream(scenario.seed, &[DAY_STREAM, u64::from(day_index), 1]);

    let mut prices = Vec::with_capacity(scenario.mn as usize + 1);
    let mut spot_var = Vec::with_capacity(fine_steps);
    let mut iv = CompensatedSum::new();
    let mut iq = CompensatedSum::new();

    let mut log_var = scenario.omega;
    let mut p = 0.0;
    prices.push(p);
    for step in 0..fine_steps {
        let var = log_var.exp();
        spot_var.push(var);
        iv.add(var);
        iq.add(var * var);
        let z: f64 = price_rng.sample(StandardNormal);
        p += var.sqrt() * sqrt_delta * z;
        if (step + 1) % scenario.substeps as usize == 0 {
            prices.push(p);
        }
        let w: f64 = vol_rng.sample(StandardNormal);
        log_var = scenario.omega + ou.decay * (log_var - scenario.omega) + ou.noise_std * w;
    }
    SimulatedDay {
        day_id: format!("d{day_index:06}"),
        prices,
        spot_var,
        true_iv: iv.total() * delta,
        true_iq: iq.total() * delta,
    }
}
