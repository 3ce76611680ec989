//! CSV serialization of the data types that cross the pipeline's file
//! boundaries. Readers skip `#` comment lines so provenance headers written
//! by the CLI pass through untouched.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::estimators::{RangeSeries, ReturnSeries};

/// One interval of a range or return series:
/// (day_id, interval_index, value, m, duration).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub day_id: String,
    pub interval_index: usize,
    pub value: f64,
    pub m: u32,
    pub duration: f64,
}

/// Realized ground truth of a simulated day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub day_id: String,
    pub true_iv: f64,
    pub true_iq: f64,
}

/// One autocorrelation lag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcfRow {
    pub lag: usize,
    pub coefficient: f64,
    pub bartlett_band: f64,
}

/// One point of a kernel-density curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub x: f64,
    pub density: f64,
}

/// One point of a signature curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignatureRow {
    pub n: u32,
    pub mean_estimate: f64,
    pub days: usize,
}

/// One fine-grid sample of a simulated path dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub day_id: String,
    pub t: f64,
    pub price: f64,
    pub spot_var: f64,
}

/// Write rows as CSV with a header record.
pub fn write_csv_rows<T: Serialize, W: Write>(writer: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Read typed CSV rows, skipping `#` comment lines.
pub fn read_csv_rows<T: DeserializeOwned, R: Read>(reader: R) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for row in r.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Flatten a range series into file rows.
pub fn range_series_rows(rs: &RangeSeries) -> Vec<SeriesRow> {
    rs.ranges()
        .iter()
        .zip(rs.counts())
        .zip(rs.durations())
        .enumerate()
        .map(|(i, ((s, m), d))| SeriesRow {
            day_id: rs.day_id().to_string(),
            interval_index: i,
            value: *s,
            m: *m,
            duration: *d,
        })
        .collect()
}

/// Flatten a return series into file rows (m is 1 by convention).
pub fn return_series_rows(rs: &ReturnSeries) -> Vec<SeriesRow> {
    rs.returns()
        .iter()
        .zip(rs.durations())
        .enumerate()
        .map(|(i, (r, d))| SeriesRow {
            day_id: rs.day_id().to_string(),
            interval_index: i,
            value: *r,
            m: 1,
            duration: *d,
        })
        .collect()
}

fn group_rows(rows: Vec<SeriesRow>) -> Result<BTreeMap<String, Vec<SeriesRow>>> {
    if rows.is_empty() {
        return Err(Error::InvalidInput("no series rows in input".into()));
    }
    let mut by_day: BTreeMap<String, Vec<SeriesRow>> = BTreeMap::new();
    for row in rows {
        by_day.entry(row.day_id.clone()).or_default().push(row);
    }
    for rows in by_day.values_mut() {
        rows.sort_by_key(|r| r.interval_index);
    }
    Ok(by_day)
}

/// Group file rows into range series, one per day, ordered by day id.
pub fn rows_to_range_series(rows: Vec<SeriesRow>) -> Result<Vec<RangeSeries>> {
    group_rows(rows)?
        .into_iter()
        .map(|(day, rows)| {
            let ranges = rows.iter().map(|r| r.value).collect();
            let counts = rows.iter().map(|r| r.m).collect();
            let durations = rows.iter().map(|r| r.duration).collect();
            RangeSeries::new(day, ranges, counts, durations)
        })
        .collect()
}

/// Group file rows into return series, one per day, ordered by day id.
pub fn rows_to_return_series(rows: Vec<SeriesRow>) -> Result<Vec<ReturnSeries>> {
    group_rows(rows)?
        .into_iter()
        .map(|(day, rows)| {
            let returns = rows.iter().map(|r| r.value).collect();
            let durations = rows.iter().map(|r| r.duration).collect();
            ReturnSeries::new(day, returns, durations)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_rows_round_trip() {
        let a = RangeSeries::equidistant("d1", vec![0.5, 0.25], vec![3, 4]).unwrap();
        let b = RangeSeries::new("d2", vec![0.1], vec![1], vec![1.0]).unwrap();
        let mut rows = range_series_rows(&a);
        rows.extend(range_series_rows(&b));
        let mut buf = Vec::new();
        write_csv_rows(&mut buf, &rows).unwrap();
        let parsed: Vec<SeriesRow> = read_csv_rows(buf.as_slice()).unwrap();
        let series = rows_to_range_series(parsed).unwrap();
        assert_eq!(series, vec![a, b]);
    }

    #[test]
    fn comment_lines_are_skipped() {
        let text = "# provenance line\nday_id,interval_index,value,m,duration\nd,0,0.5,2,1.0\n";
        let rows: Vec<SeriesRow> = read_csv_rows(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].m, 2);
        let series = rows_to_return_series(rows).unwrap();
        assert_eq!(series[0].returns(), &[0.5]);
    }

    #[test]
    fn empty_input_is_an_input_error() {
        let rows: Vec<SeriesRow> = read_csv_rows("".as_bytes()).unwrap();
        assert!(rows_to_range_series(rows).is_err());
    }

    #[test]
    fn malformed_rows_error() {
        let text = "day_id,interval_index,value,m,duration\nd,0,not_a_number,2,1.0\n";
        let got: Result<Vec<SeriesRow>> = read_csv_rows(text.as_bytes());
        assert!(got.is_err());
    }
}
