use std::io::Write;
use std::time::Duration;

use rug::Float;
use serde::{Deserialize, Serialize};

use super::{millis, tv_with_plan, StateSum, TvError, TvOptions};
use crate::arith::{decimal_digits, format_decimal};
use crate::triangulation::GluingTable;

/// The invariant at one order together with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct TVRecord {
    pub r: u32,
    pub value: Float,
    pub declared_zero: bool,
    pub bits_used: u32,
    pub admissible_count: u64,
    pub nodes_visited: u64,
    pub wall_time: Duration,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordLine {
    r: u32,
    tv: String,
    zero: bool,
    bits: u32,
    adm: u64,
    nodes: u64,
    ms: u64,
}

impl TVRecord {
    /// The value as a decimal string with the digits the accepted width carries.
    pub fn value_string(&self) -> String {
        if self.declared_zero {
            return "0".to_string();
        }
        format_decimal(&self.value, decimal_digits(self.bits_used))
    }

    pub fn value_f64(&self) -> f64 {
        if self.declared_zero {
            0.0
        } else {
            self.value.to_f64()
        }
    }

    /// One JSON object on a single line; `ms` is written as 0 without timings.
    pub fn to_json_line(&self, timings: bool) -> String {
        let line = RecordLine {
            r: self.r,
            tv: self.value_string(),
            zero: self.declared_zero,
            bits: self.bits_used,
            adm: self.admissible_count,
            nodes: self.nodes_visited,
            ms: if timings { millis(self.wall_time) } else { 0 },
        };
        serde_json::to_string(&line).expect("records serialize")
    }

    /// Parses a line written by [`TVRecord::to_json_line`]; `line_no` is used in errors.
    pub fn from_json_line(text: &str, line_no: usize) -> Result<Self, TvError> {
        let bad = |message: String| TvError::BadRecord { line: line_no, message };
        let line: RecordLine = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let bits = line.bits.max(32) * 2;
        let value = Float::parse(&line.tv).map_err(|e| bad(format!("tv: {e}")))?;
        Ok(TVRecord {
            r: line.r,
            value: Float::with_val(bits, value),
            declared_zero: line.zero,
            bits_used: line.bits,
            admissible_count: line.adm,
            nodes_visited: line.nodes,
            wall_time: Duration::from_millis(line.ms),
        })
    }
}

/// Records at increasing odd orders for one manifold.
#[derive(Clone, Debug, Default)]
pub struct TVSeries {
    pub records: Vec<TVRecord>,
    pub manifold_label: String,
    pub target_limit: Option<f64>,
}

impl TVSeries {
    pub fn from_json_lines(text: &str) -> Result<Vec<TVRecord>, TvError> {
        let mut records: Vec<TVRecord> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec = TVRecord::from_json_line(line, i + 1)?;
            if records.last().is_some_and(|last| last.r >= rec.r) || rec.r % 2 == 0 {
                return Err(TvError::BadRecord {
                    line: i + 1,
                    message: format!("order {} is not odd and increasing", rec.r),
                });
            }
            records.push(rec);
        }
        Ok(records)
    }
}

/// `(2π/r) ln TV_r`, absent for records declared zero.
pub fn log_quantity(rec: &TVRecord) -> Result<Option<f64>, TvError> {
    if rec.declared_zero {
        return Ok(None);
    }
    if rec.value.is_sign_negative() || rec.value.is_zero() {
        return Err(TvError::ConventionViolation { r: rec.r, value: rec.value_string() });
    }
    let ln = Float::with_val(rec.value.prec(), rec.value.ln_ref());
    Ok(Some(2.0 * std::f64::consts::PI / rec.r as f64 * ln.to_f64()))
}

/// `S_r = max_{k >= r} |lq(k) - target|` over the nonzero records, from a
/// single backward pass.
pub fn s_r(series: &TVSeries) -> Result<Vec<(u32, f64)>, TvError> {
    let target = series.target_limit.ok_or(TvError::MissingTarget)?;
    let mut points = Vec::new();
    for rec in &series.records {
        if let Some(lq) = log_quantity(rec)? {
            points.push((rec.r, (lq - target).abs()));
        }
    }
    let mut running = f64::NEG_INFINITY;
    for p in points.iter_mut().rev() {
        running = running.max(p.1);
        p.1 = running;
    }
    Ok(points)
}

/// Computes `TV_r` for every odd `r` in `r_min..=r_max`, keeping any record
/// already in `previous`. Each order starts at the width the previous order
/// settled on. `on_record` sees every newly computed record.
pub fn tv_sequence(
    table: &GluingTable,
    r_min: u32,
    r_max: u32,
    options: &TvOptions,
    previous: Vec<TVRecord>,
    mut on_record: impl FnMut(&TVRecord) -> std::io::Result<()>,
) -> Result<TVSeries, TvError> {
    if r_min % 2 == 0 || r_max % 2 == 0 || r_min > r_max || r_min < 3 {
        return Err(TvError::BadRange(r_min, r_max));
    }
    let plan = StateSum::new(table, options.mode)?;
    let mut bits = options.policy.initial_bits;
    let mut records = Vec::new();
    let mut previous = previous.into_iter().peekable();
    for r in (r_min..=r_max).step_by(2) {
        while previous.peek().is_some_and(|p| p.r < r) {
            previous.next();
        }
        let rec = match previous.next_if(|p| p.r == r) {
            Some(done) => done,
            None => {
                let rec = tv_with_plan(&plan, r, options, bits)?;
                log::info!("r = {r}: {} ({} colorings, {} bits)", rec.value_string(), rec.admissible_count, rec.bits_used);
                on_record(&rec).map_err(|e| TvError::BadRecord { line: 0, message: e.to_string() })?;
                rec
            }
        };
        bits = rec.bits_used.max(32);
        records.push(rec);
    }
    Ok(TVSeries { records, manifold_label: String::new(), target_limit: None })
}

/// `r,tv,log_quantity,s_r` with empty cells where a quantity is undefined.
pub fn write_csv(series: &TVSeries, mut out: impl Write) -> Result<(), TvError> {
    let io = |e: std::io::Error| TvError::BadRecord { line: 0, message: e.to_string() };
    let s = if series.target_limit.is_some() { s_r(series)? } else { Vec::new() };
    writeln!(out, "r,tv,log_quantity,s_r").map_err(io)?;
    for rec in &series.records {
        let lq = log_quantity(rec)?.map(|x| format!("{x:.12e}")).unwrap_or_default();
        let sr = s.iter().find(|p| p.0 == rec.r).map(|p| format!("{:.12e}", p.1)).unwrap_or_default();
        writeln!(out, "{},{},{},{}", rec.r, rec.value_string(), lq, sr).map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(r: u32, value: f64) -> TVRecord {
        TVRecord {
            r,
            value: Float::with_val(256, value),
            declared_zero: false,
            bits_used: 128,
            admissible_count: 1,
            nodes_visited: 1,
            wall_time: Duration::from_millis(5),
        }
    }

    #[test]
    fn log_quantity_examples() {
        assert_eq!(log_quantity(&record(5, 1.0)).unwrap(), Some(0.0));
        let r = 7;
        let v = (r as f64 / (2.0 * std::f64::consts::PI)).exp();
        assert!((log_quantity(&record(r, v)).unwrap().unwrap() - 1.0).abs() < 1e-12);
        let mut zero = record(9, 0.0);
        zero.declared_zero = true;
        assert_eq!(log_quantity(&zero).unwrap(), None);
        assert!(matches!(log_quantity(&record(9, -0.5)), Err(TvError::ConventionViolation { .. })));
    }

    #[test]
    fn s_r_is_a_tail_maximum() {
        let target = 0.3;
        let series = TVSeries {
            records: vec![record(5, 2.0), record(7, 0.5), record(9, 1.5), record(11, 1.2)],
            manifold_label: String::new(),
            target_limit: Some(target),
        };
        let s = s_r(&series).unwrap();
        assert!(s.windows(2).all(|w| w[0].1 >= w[1].1));
        let last = log_quantity(&series.records[3]).unwrap().unwrap();
        assert!((s[3].1 - (last - target).abs()).abs() < 1e-15);
        let flat = TVSeries {
            records: (5..12).step_by(2).map(|r| record(r, (target * r as f64 / (2.0 * std::f64::consts::PI)).exp())).collect(),
            target_limit: Some(target),
            ..Default::default()
        };
        assert!(s_r(&flat).unwrap().iter().all(|p| p.1 < 1e-12));
        assert!(matches!(s_r(&TVSeries::default()), Err(TvError::MissingTarget)));
    }

    #[test]
    fn json_lines_round_trip() {
        let rec = record(13, 0.0123456789);
        let line = rec.to_json_line(true);
        assert!(line.starts_with(r#"{"r":13,"tv":""#));
        let back = TVRecord::from_json_line(&line, 1).unwrap();
        assert_eq!(back.value_string(), rec.value_string());
        assert_eq!(back.wall_time, rec.wall_time);
        assert_eq!(back.to_json_line(true), line);
    }

    #[test]
    fn series_must_increase() {
        let a = record(7, 1.0).to_json_line(true);
        let b = record(5, 1.0).to_json_line(true);
        assert!(TVSeries::from_json_lines(&format!("{a}\n{b}\n")).is_err());
    }
}
