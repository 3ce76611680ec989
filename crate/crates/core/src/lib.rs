//! Estimation of the integrated variance of a continuous semimartingale from
//! intraday price ranges.
//!
//! The crate is organized around the life cycle of a range-based variance
//! estimate:
//!
//! * [`moments`] — moment constants of the range of Brownian motion (analytic
//!   asymptotic values, simulated discrete-sample values, cached tables).
//! * [`estimators`] — the point estimators: realized variance, realized
//!   quarticity, and their range-based counterparts with full-grid,
//!   fixed-`m`, per-interval, and irregular-duration variants.
//! * [`inference`] — feasible confidence intervals and t-statistics under the
//!   raw, log, and square-root limit theories.
//! * [`simulate`] — ground-truth path generators: scaled Brownian motion and a
//!   log-variance Ornstein-Uhlenbeck stochastic volatility model.
//! * [`experiments`] — Monte Carlo studies: coverage, efficiency, kernel
//!   densities of standardized errors.
//! * [`ingest`] — tick-data filtering, increment counting, previous-tick
//!   sampling, and per-interval range extraction.
//! * [`stats`] — descriptive statistics, correlation, autocorrelation with
//!   Bartlett bands, signature curves.
//!
//! All Monte Carlo routines are deterministic for a given seed and independent
//! of thread count: work is split into fixed path blocks whose generators are
//! derived from `(seed, block index)`, see [`rng`].

pub mod error;
pub mod estimators;
pub mod experiments;
pub mod inference;
pub mod ingest;
pub mod io;
pub mod moments;
pub mod rng;
pub mod simulate;
pub mod special;
pub mod stats;

mod numeric;

pub use error::{Error, Result};
pub use estimators::{RangeSeries, ReturnSeries, RrvMode};
pub use inference::{EstimateRecord, EstimatorKind, Transform};
pub use ingest::{FilterConfig, FilterReport, PriceGrid, Tick, TickSeries};
pub use moments::{LambdaTable, MonteCarloEstimate, VarianceFactor};
pub use simulate::{SimulatedDay, SvScenario};
pub use stats::SeriesSummary;
