//! Tick-data ingestion: filtering, increment counting, previous-tick
//! sampling, and per-interval range extraction.
//!
//! The pipeline per day is: parse -> [`filter_ticks`] -> either
//! [`previous_tick_grid`] (returns for RV) or [`extract_range_series`]
//! (per-interval ranges and observation counts for the range-based
//! estimators). Within a day processing is single-pass and sequential —
//! state carries across ticks — while distinct days are independent.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{RangeSeries, ReturnSeries};

/// One quote or trade update. `price` is the traded price or, for quote
/// pairs, the midquote; the pair is kept for spread-based filtering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tick {
    /// Seconds since midnight.
    pub time: f64,
    pub price: f64,
    pub quote: Option<(f64, f64)>,
}

impl Tick {
    pub fn trade(time: f64, price: f64) -> Self {
        Tick {
            time,
            price,
            quote: None,
        }
    }

    pub fn quote(time: f64, bid: f64, ask: f64) -> Self {
        Tick {
            time,
            price: 0.5 * (bid + ask),
            quote: Some((bid, ask)),
        }
    }
}

/// A day of time-ordered ticks with its trading session.
#[derive(Debug, Clone, PartialEq)]
pub struct TickSeries {
    day_id: String,
    ticks: Vec<Tick>,
    session: (f64, f64),
}

impl TickSeries {
    /// Ticks are stably sorted by timestamp; price validity is the filter's
    /// concern so that raw, dirty days can be represented.
    pub fn new(day_id: impl Into<String>, mut ticks: Vec<Tick>, session: (f64, f64)) -> Result<Self> {
        if !(session.0 < session.1) {
            return Err(Error::InvalidInput(format!(
                "session open {} must precede close {}",
                session.0, session.1
            )));
        }
        ticks.sort_by(|a, b| a.time.partial_cmp(&b.time).unwrap());
        Ok(TickSeries {
            day_id: day_id.into(),
            ticks,
            session,
        })
    }

    pub fn day_id(&self) -> &str {
        &self.day_id
    }

    pub fn ticks(&self) -> &[Tick] {
        &self.ticks
    }

    pub fn session(&self) -> (f64, f64) {
        self.session
    }

    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }
}

/// NYSE cash session, 9:30 to 16:00, in seconds since midnight.
pub const DEFAULT_SESSION: (f64, f64) = (34_200.0, 57_600.0);

/// Filtering rules. Defaults: NYSE session, outlier rule of 50 neighbors and
/// 10 median absolute deviations on log prices.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    pub session: (f64, f64),
    /// Neighbors in the centered outlier window (half before, half after).
    pub outlier_window: usize,
    /// Drop threshold in median absolute deviations; the test is skipped
    /// when the window MAD is zero (flat quote stretches) or when fewer
    /// than 10 neighbors exist.
    pub outlier_mads: f64,
    /// Fail on unparseable rows instead of counting them.
    pub strict: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            session: DEFAULT_SESSION,
            outlier_window: 50,
            outlier_mads: 10.0,
            strict: false,
        }
    }
}

/// Per-day audit of the filter and the increment counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub day_id: String,
    pub raw_count: usize,
    pub kept_count: usize,
    pub dropped_unparseable: usize,
    pub dropped_zero_price: usize,
    pub dropped_out_of_session: usize,
    pub dropped_negative_spread: usize,
    pub dropped_outlier: usize,
    /// Consecutive-tick price changes that are nonzero.
    pub count_nonzero: usize,
    /// Nonzero second differences after compaction, repeated reversals
    /// collapsed; the effective increment count.
    pub count_reversal_adjusted: usize,
}

/// Drop zero/negative prices, out-of-session updates, and negative spreads;
/// then apply the rolling-median outlier rule; then count increments.
pub fn filter_ticks(raw: &TickSeries, rules: &FilterConfig) -> Result<(TickSeries, FilterReport)> {
    let mut report = FilterReport {
        day_id: raw.day_id().to_string(),
        raw_count: raw.len(),
        kept_count: 0,
        dropped_unparseable: 0,
        dropped_zero_price: 0,
        dropped_out_of_session: 0,
        dropped_negative_spread: 0,
        dropped_outlier: 0,
        count_nonzero: 0,
        count_reversal_adjusted: 0,
    };
    let (open, close) = rules.session;
    let mut kept: Vec<Tick> = Vec::with_capacity(raw.len());
    for t in raw.ticks() {
        let price_ok = match t.quote {
            Some((bid, ask)) => bid > 0.0 && ask > 0.0,
            None => t.price > 0.0,
        };
        if !price_ok {
            report.dropped_zero_price += 1;
            continue;
        }
        if t.time < open || t.time > close {
            report.dropped_out_of_session += 1;
            continue;
        }
        if let Some((bid, ask)) = t.quote {
            if bid > ask {
                report.dropped_negative_spread += 1;
                continue;
            }
        }
        kept.push(*t);
    }
    let outliers = outlier_flags(&kept, rules.outlier_window, rules.outlier_mads);
    let mut filtered = Vec::with_capacity(kept.len());
    for (t, is_outlier) in kept.into_iter().zip(outliers) {
        if is_outlier {
            report.dropped_outlier += 1;
        } else {
            filtered.push(t);
        }
    }
    report.kept_count = filtered.len();
    let series = TickSeries::new(raw.day_id(), filtered, raw.session())?;
    let (nonzero, reversal) = count_increments(&series);
    report.count_nonzero = nonzero;
    report.count_reversal_adjusted = reversal;
    Ok((series, report))
}

/// Centered rolling-median outlier flags on log prices. A tick is an outlier
/// when it deviates from the median of its neighbors (window/2 on each side,
/// self excluded) by more than `mads` median absolute deviations.
fn outlier_flags(ticks: &[Tick], window: usize, mads: f64) -> Vec<bool> {
    let n = ticks.len();
    let half = window / 2;
    if n == 0 || window == 0 {
        return vec![false; n];
    }
    let logs: Vec<f64> = ticks.iter().map(|t| t.price.ln()).collect();
    let mut flags = vec![false; n];
    let mut scratch: Vec<f64> = Vec::with_capacity(window + 1);
    for i in 0..n {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(n - 1);
        scratch.clear();
        for (j, v) in logs.iter().enumerate().take(hi + 1).skip(lo) {
            if j != i {
                scratch.push(*v);
            }
        }
        if scratch.len() < 10 {
            continue;
        }
        let med = median_in_place(&mut scratch);
        for v in scratch.iter_mut() {
            *v = (*v - med).abs();
        }
        let mad = median_in_place(&mut scratch);
        if mad > 0.0 && (logs[i] - med).abs() > mads * mad {
            flags[i] = true;
        }
    }
    flags
}

fn median_in_place(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Count (#r != 0, #dr != 0): nonzero consecutive-tick price changes, and
/// nonzero second differences on the zero-change-compacted series with
/// repeated instantaneous reversals collapsed.
///
/// Collapse rule: on the compacted change series, a maximal run of k >= 2
/// alternating-sign, equal-magnitude changes (a bid-ask bounce) contributes
/// min(k - 1, 2) — the entry move and at most one reversal — instead of its
/// k - 1 literal nonzero second differences. Bounces repeat the same two
/// price levels, so the equal-magnitude comparison is exact in floating
/// point. Fewer than two ticks count as (0, 0).
pub fn count_increments(ts: &TickSeries) -> (usize, usize) {
    if ts.len() < 2 {
        return (0, 0);
    }
    let prices: Vec<f64> = ts.ticks().iter().map(|t| t.price).collect();
    let changes = compact_changes(&prices);
    (changes.len(), collapsed_second_differences(&changes))
}

/// First differences with zero changes removed.
fn compact_changes(prices: &[f64]) -> Vec<f64> {
    let mut changes = Vec::new();
    let mut last = prices[0];
    for &p in &prices[1..] {
        if p != last {
            changes.push(p - last);
            last = p;
        }
    }
    changes
}

/// Nonzero second differences with bounce runs collapsed; see
/// [`count_increments`].
fn collapsed_second_differences(d: &[f64]) -> usize {
    let k = d.len();
    if k < 2 {
        return 0;
    }
    let mut pair_in_run = vec![false; k - 1];
    let mut count = 0usize;
    let mut i = 0usize;
    while i < k {
        let mut j = i;
        while j + 1 < k && d[j + 1].abs() == d[i].abs() && (d[j + 1] > 0.0) != (d[j] > 0.0) {
            j += 1;
        }
        if j > i {
            // run of j - i + 1 alternating equal-magnitude changes
            count += (j - i).min(2);
            for p in pair_in_run.iter_mut().take(j).skip(i) {
                *p = true;
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    for (p, w) in pair_in_run.iter().enumerate() {
        if !w && d[p + 1] != d[p] {
            count += 1;
        }
    }
    count
}

/// Whether grid and range extraction work on log prices (the estimators'
/// scale) or on the stored values as-is (inputs that are already logs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceScale {
    LogOfPrice,
    AsIs,
}

impl PriceScale {
    fn apply(&self, p: f64) -> f64 {
        match self {
            PriceScale::LogOfPrice => p.ln(),
            PriceScale::AsIs => p,
        }
    }
}

/// An equidistant grid of previous-tick sampled prices: n + 1 points
/// spanning open to close inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceGrid {
    pub day_id: String,
    pub prices: Vec<f64>,
    pub n: u32,
}

impl PriceGrid {
    pub fn return_series(&self) -> Result<ReturnSeries> {
        let returns: Vec<f64> = self.prices.windows(2).map(|w| w[1] - w[0]).collect();
        ReturnSeries::equidistant(self.day_id.clone(), returns)
    }
}

/// Previous-tick sampling: each of the n + 1 grid times takes the most
/// recent tick price at or before it (a tick exactly on the grid wins).
/// A day with no tick at or before the open cannot anchor the grid.
pub fn previous_tick_grid(ts: &TickSeries, n: u32, scale: PriceScale) -> Result<PriceGrid> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one interval".into()));
    }
    let (open, close) = ts.session();
    let ticks = ts.ticks();
    if ticks.is_empty() || ticks[0].time > open {
        return Err(Error::InvalidInput(format!(
            "day {}: no tick at or before the session open",
            ts.day_id()
        )));
    }
    let step = (close - open) / f64::from(n);
    let mut prices = Vec::with_capacity(n as usize + 1);
    let mut idx = 0usize;
    for k in 0..=n {
        let grid_time = open + step * f64::from(k);
        while idx + 1 < ticks.len() && ticks[idx + 1].time <= grid_time {
            idx += 1;
        }
        prices.push(scale.apply(ticks[idx].price));
    }
    Ok(PriceGrid {
        day_id: ts.day_id().to_string(),
        prices,
        n,
    })
}

/// Per-interval ranges and observation counts at sampling frequency n.
///
/// Interval i owns the ticks in ((i-1)/n, i/n] of the normalized session,
/// with the previous-tick value at the left boundary carried in as the
/// opening price so ranges cover the day without gaps. The per-interval
/// count m_i is the reversal-adjusted increment count of the owned
/// sequence, floored at 1 so empty intervals contribute a zero range
/// against the exact m = 1 constants.
pub fn extract_range_series(ts: &TickSeries, n: u32, scale: PriceScale) -> Result<RangeSeries> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one interval".into()));
    }
    let (open, close) = ts.session();
    let ticks = ts.ticks();
    if ticks.is_empty() {
        return Err(Error::InvalidInput(format!(
            "day {}: no ticks to extract ranges from",
            ts.day_id()
        )));
    }
    if ticks[0].time > open {
        return Err(Error::InvalidInput(format!(
            "day {}: no tick at or before the session open",
            ts.day_id()
        )));
    }
    let span = close - open;
    let nf = f64::from(n);
    // Bucket ticks: interval index in 1..=n for tau in ((i-1)/n, i/n].
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); n as usize];
    let mut carry_price = vec![f64::NAN; n as usize];
    let mut last_price = f64::NAN;
    let mut next_boundary = 0usize; // boundaries whose carry is not yet fixed
    for t in ticks {
        let tau = (t.time - open) / span;
        if tau > 1.0 {
            break;
        }
        // Fix carries for all boundaries at or before this tick.
        let pos = tau * nf;
        while next_boundary < n as usize && (next_boundary as f64) < pos {
            carry_price[next_boundary] = last_price;
            next_boundary += 1;
        }
        if tau > 0.0 {
            let idx = (pos.ceil() as usize).clamp(1, n as usize) - 1;
            buckets[idx].push(t.price);
        }
        last_price = t.price;
    }
    while next_boundary < n as usize {
        carry_price[next_boundary] = last_price;
        next_boundary += 1;
    }

    let mut ranges = Vec::with_capacity(n as usize);
    let mut counts = Vec::with_capacity(n as usize);
    let mut seq: Vec<f64> = Vec::new();
    for i in 0..n as usize {
        seq.clear();
        seq.push(carry_price[i]);
        seq.extend_from_slice(&buckets[i]);
        let mut max = f64::NEG_INFINITY;
        let mut min = f64::INFINITY;
        for &p in &seq {
            let v = scale.apply(p);
            if v > max {
                max = v;
            }
            if v < min {
                min = v;
            }
        }
        ranges.push(max - min);
        let m = collapsed_second_differences(&compact_changes(&seq));
        counts.push((m as u32).max(1));
    }
    RangeSeries::equidistant(ts.day_id(), ranges, counts)
}

/// Column layout and parsing options for tick CSV input.
#[derive(Debug, Clone, PartialEq)]
pub struct TickCsvConfig {
    pub delimiter: u8,
    pub has_header: bool,
    /// Rows carry (bid, ask) instead of a single price.
    pub quotes: bool,
    pub date_col: usize,
    pub time_col: usize,
    /// Price column (trades) or bid column (quotes).
    pub price_col: usize,
    /// Ask column (quotes only).
    pub ask_col: usize,
    /// Numeric times are epoch seconds rather than seconds since midnight.
    pub time_is_epoch: bool,
    pub session: (f64, f64),
    pub strict: bool,
}

impl Default for TickCsvConfig {
    fn default() -> Self {
        TickCsvConfig {
            delimiter: b',',
            has_header: true,
            quotes: false,
            date_col: 0,
            time_col: 1,
            price_col: 2,
            ask_col: 3,
            time_is_epoch: false,
            session: DEFAULT_SESSION,
            strict: false,
        }
    }
}

/// Parsed tick input: one series per day plus the unparseable-row count.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTicks {
    pub days: Vec<TickSeries>,
    pub unparseable: usize,
}

/// Read tick rows of the form (date, time, price) or (date, time, bid, ask).
///
/// Times accept HH:MM:SS(.frac) or a plain number (seconds since midnight,
/// or epoch seconds with `time_is_epoch`). Malformed rows are counted and
/// skipped unless `strict` is set.
pub fn read_ticks_csv<R: Read>(reader: R, cfg: &TickCsvConfig) -> Result<ParsedTicks> {
    let mut r = csv::ReaderBuilder::new()
        .delimiter(cfg.delimiter)
        .has_headers(cfg.has_header)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut by_day: BTreeMap<String, Vec<Tick>> = BTreeMap::new();
    let mut unparseable = 0usize;
    for record in r.records() {
        let record = record?;
        match parse_tick_record(&record, cfg) {
            Ok((day, tick)) => by_day.entry(day).or_default().push(tick),
            Err(e) => {
                if cfg.strict {
                    return Err(e);
                }
                unparseable += 1;
            }
        }
    }
    let days = by_day
        .into_iter()
        .map(|(day, ticks)| TickSeries::new(day, ticks, cfg.session))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedTicks { days, unparseable })
}

fn parse_tick_record(record: &csv::StringRecord, cfg: &TickCsvConfig) -> Result<(String, Tick)> {
    let field = |i: usize| -> Result<&str> {
        record
            .get(i)
            .ok_or_else(|| Error::Parse(format!("row has no column {i}: {record:?}")))
    };
    let day = field(cfg.date_col)?.to_string();
    if day.is_empty() {
        return Err(Error::Parse("empty date field".into()));
    }
    let time = parse_time(field(cfg.time_col)?, cfg.time_is_epoch)?;
    let tick = if cfg.quotes {
        let bid: f64 = parse_number(field(cfg.price_col)?)?;
        let ask: f64 = parse_number(field(cfg.ask_col)?)?;
        Tick::quote(time, bid, ask)
    } else {
        Tick::trade(time, parse_number(field(cfg.price_col)?)?)
    };
    Ok((day, tick))
}

fn parse_number(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad numeric field: {s:?}")))
}

/// HH:MM:SS(.frac) or numeric seconds.
fn parse_time(s: &str, epoch: bool) -> Result<f64> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad time field: {s:?}")));
        }
        let h: f64 = parse_number(parts[0])?;
        let m: f64 = parse_number(parts[1])?;
        let sec: f64 = parse_number(parts[2])?;
        if !(0.0..24.0).contains(&h) || !(0.0..60.0).contains(&m) || !(0.0..60.0).contains(&sec) {
            return Err(Error::Parse(format!("time out of range: {s:?}")));
        }
        return Ok(h * 3600.0 + m * 60.0 + sec);
    }
    let v = parse_number(s)?;
    if epoch {
        Ok(v.rem_euclid(86_400.0))
    } else {
        Ok(v)
    }
}
