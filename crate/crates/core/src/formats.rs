//! CSV schemas read and written by the pipeline.
//!
//! | file            | header                                                  |
//! |-----------------|---------------------------------------------------------|
//! | configurations  | `b,l,fb_hz,fl_hz`                                       |
//! | measurements    | `app,b,l,fb_hz,fl_hz,time_s,power_w,repeat`             |
//! | estimates       | `b,L,fb_hz,fl_hz,time_s,energy_j,p_seq_w,p_par_w`       |
//! | frontier        | estimates header plus `rank` (1 = fastest)              |
//! | speedup pairs   | `f_hz,t_little_s,t_big_s`                               |
//! | power trace     | `t_s,power_w`                                           |
//! | reference runs  | `label,time_s,energy_j`                                 |
//!
//! Row numbers in errors are 1-based line numbers, the header being line 1.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::fitting::SpeedupPair;
use crate::models::Estimate;
use crate::pareto::ReferencePoint;
use crate::platform::Configuration;
use crate::scalar::Scalar;

pub const CONFIGURATION_HEADER: [&str; 4] = ["b", "l", "fb_hz", "fl_hz"];
pub const MEASUREMENT_HEADER: [&str; 8] = ["app", "b", "l", "fb_hz", "fl_hz", "time_s", "power_w", "repeat"];
pub const ESTIMATE_HEADER: [&str; 8] = ["b", "L", "fb_hz", "fl_hz", "time_s", "energy_j", "p_seq_w", "p_par_w"];
pub const PAIRS_HEADER: [&str; 3] = ["f_hz", "t_little_s", "t_big_s"];
pub const TRACE_HEADER: [&str; 2] = ["t_s", "power_w"];
pub const REFERENCE_HEADER: [&str; 3] = ["label", "time_s", "energy_j"];

/// One row of a measurement file: a single run of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRow<T> {
    pub app: String,
    pub config: Configuration<T>,
    pub time_s: Option<T>,
    pub power_w: Option<T>,
    pub repeat: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSample<T> {
    pub t_s: T,
    pub power_w: T,
}

struct Rows<R> {
    reader: csv::Reader<R>,
    line: usize,
}

fn open<R: Read>(input: R, expected: &[&str], optional_tail: &[&str]) -> Result<(Rows<R>, usize)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers()?.clone();
    let got: Vec<&str> = header.iter().collect();
    let extra = got.len().checked_sub(expected.len()).unwrap_or(usize::MAX);
    let matches = got.len() >= expected.len()
        && got[..expected.len()] == *expected
        && extra <= optional_tail.len()
        && got[expected.len()..] == optional_tail[..extra];
    if got.is_empty() || got == [""] {
        return Err(Error::Empty("file has no header"));
    }
    if !matches {
        return Err(Error::Row {
            row: 1,
            message: format!("expected header `{}`, found `{}`", expected.join(","), got.join(",")),
        });
    }
    Ok((Rows { reader, line: 1 }, got.len()))
}

impl<R: Read> Rows<R> {
    fn next(&mut self) -> Option<Result<(usize, csv::StringRecord)>> {
        let mut record = csv::StringRecord::new();
        match self.reader.read_record(&mut record) {
            Ok(false) => None,
            Ok(true) => {
                self.line = record.position().map_or(self.line + 1, |p| p.line() as usize);
                Some(Ok((self.line, record)))
            }
            Err(e) => {
                let line = e.position().map_or(self.line + 1, |p| p.line() as usize);
                Some(Err(Error::Row { row: line, message: e.to_string() }))
            }
        }
    }
}

fn row_err(row: usize, message: impl Into<String>) -> Error {
    Error::Row { row, message: message.into() }
}

fn number<T: Scalar>(row: usize, name: &str, field: &str) -> Result<T> {
    let v: f64 = field
        .parse()
        .map_err(|_| row_err(row, format!("{name}: cannot parse {field:?} as a number")))?;
    if !v.is_finite() {
        return Err(row_err(row, format!("{name}: {field:?} is not finite")));
    }
    Ok(T::of(v))
}

fn optional_number<T: Scalar>(row: usize, name: &str, field: &str) -> Result<Option<T>> {
    if field.is_empty() {
        Ok(None)
    } else {
        number(row, name, field).map(Some)
    }
}

fn count(row: usize, name: &str, field: &str) -> Result<u32> {
    field
        .parse()
        .map_err(|_| row_err(row, format!("{name}: cannot parse {field:?} as a non-negative integer")))
}

fn config_at<T: Scalar>(row: usize, rec: &csv::StringRecord, at: usize) -> Result<Configuration<T>> {
    Ok(Configuration::new(
        count(row, "b", &rec[at])?,
        count(row, "l", &rec[at + 1])?,
        number(row, "fb_hz", &rec[at + 2])?,
        number(row, "fl_hz", &rec[at + 3])?,
    ))
}

pub fn read_configurations<T: Scalar, R: Read>(input: R) -> Result<Vec<Configuration<T>>> {
    let (mut rows, _) = open(input, &CONFIGURATION_HEADER, &[])?;
    let mut out = Vec::new();
    while let Some(r) = rows.next() {
        let (line, rec) = r?;
        out.push(config_at(line, &rec, 0)?);
    }
    Ok(out)
}

pub fn write_configurations<T: Scalar, W: Write>(out: W, configs: &[Configuration<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CONFIGURATION_HEADER)?;
    for c in configs {
        w.write_record([
            c.big_cores.to_string(),
            c.little_cores.to_string(),
            c.big_freq_hz.to_string(),
            c.little_freq_hz.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses measurement rows. Checks the schema and the sign of measured values
/// but not the configurations; see [`crate::harness::ingest_measurements`].
pub fn read_measurement_rows<T: Scalar, R: Read>(input: R) -> Result<Vec<(usize, MeasurementRow<T>)>> {
    let (mut rows, _) = open(input, &MEASUREMENT_HEADER, &[])?;
    let mut out = Vec::new();
    while let Some(r) = rows.next() {
        let (line, rec) = r?;
        let time_s = optional_number(line, "time_s", &rec[5])?;
        let power_w = optional_number(line, "power_w", &rec[6])?;
        if time_s.is_none() && power_w.is_none() {
            return Err(row_err(line, "time_s and power_w are both empty"));
        }
        for (name, v) in [("time_s", time_s), ("power_w", power_w)] {
            if let Some(v) = v {
                if v <= T::zero() {
                    return Err(row_err(line, format!("{name} must be positive, got {v}")));
                }
            }
        }
        let repeat = if rec[7].is_empty() { 0 } else { count(line, "repeat", &rec[7])? };
        out.push((
            line,
            MeasurementRow {
                app: rec[0].to_string(),
                config: config_at(line, &rec, 1)?,
                time_s,
                power_w,
                repeat,
            },
        ));
    }
    Ok(out)
}

pub fn write_measurement_rows<T: Scalar, W: Write>(out: W, rows: &[MeasurementRow<T>]) -> Result<()> {
    let opt = |v: Option<T>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(MEASUREMENT_HEADER)?;
    for r in rows {
        w.write_record([
            r.app.clone(),
            r.config.big_cores.to_string(),
            r.config.little_cores.to_string(),
            r.config.big_freq_hz.to_string(),
            r.config.little_freq_hz.to_string(),
            opt(r.time_s),
            opt(r.power_w),
            r.repeat.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn estimate_fields<T: Scalar>(e: &Estimate<T>) -> Vec<String> {
    vec![
        e.config.big_cores.to_string(),
        e.config.little_cores.to_string(),
        e.config.big_freq_hz.to_string(),
        e.config.little_freq_hz.to_string(),
        e.time_s.to_string(),
        e.energy_j.to_string(),
        e.power_seq_w.to_string(),
        e.power_par_w.to_string(),
    ]
}

pub fn write_estimates<T: Scalar, W: Write>(out: W, estimates: &[Estimate<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ESTIMATE_HEADER)?;
    for e in estimates {
        w.write_record(estimate_fields(e))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a frontier (already sorted by time) with a 1-based `rank` column.
pub fn write_frontier<T: Scalar, W: Write>(out: W, frontier: &[Estimate<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = ESTIMATE_HEADER.to_vec();
    header.push("rank");
    w.write_record(&header)?;
    for (i, e) in frontier.iter().enumerate() {
        let mut fields = estimate_fields(e);
        fields.push((i + 1).to_string());
        w.write_record(fields)?;
    }
    w.flush()?;
    Ok(())
}

/// Two whitespace-separated columns `time_s energy_j`, for gnuplot.
pub fn write_gnuplot<T: Scalar, W: Write>(mut out: W, frontier: &[Estimate<T>]) -> Result<()> {
    writeln!(out, "# time_s energy_j")?;
    for e in frontier {
        writeln!(out, "{} {}", e.time_s, e.energy_j)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads an estimates file; a trailing `rank` column (frontier files) is
/// accepted and ignored.
pub fn read_estimates<T: Scalar, R: Read>(input: R) -> Result<Vec<Estimate<T>>> {
    let (mut rows, _) = open(input, &ESTIMATE_HEADER, &["rank"])?;
    let mut out = Vec::new();
    while let Some(r) = rows.next() {
        let (line, rec) = r?;
        let config = config_at(line, &rec, 0)?;
        if config.active_cores() == 0 {
            return Err(row_err(line, "configuration has no active cores"));
        }
        out.push(Estimate {
            config,
            time_s: number(line, "time_s", &rec[4])?,
            energy_j: number(line, "energy_j", &rec[5])?,
            power_seq_w: number(line, "p_seq_w", &rec[6])?,
            power_par_w: number(line, "p_par_w", &rec[7])?,
        });
    }
    if out.is_empty() {
        return Err(Error::Empty("estimates file has no rows"));
    }
    Ok(out)
}

pub fn read_speedup_pairs<T: Scalar, R: Read>(input: R) -> Result<Vec<SpeedupPair<T>>> {
    let (mut rows, _) = open(input, &PAIRS_HEADER, &[])?;
    let mut out = Vec::new();
    while let Some(r) = rows.next() {
        let (line, rec) = r?;
        let pair = SpeedupPair {
            freq_hz: number(line, "f_hz", &rec[0])?,
            t_little_s: number(line, "t_little_s", &rec[1])?,
            t_big_s: number(line, "t_big_s", &rec[2])?,
        };
        if pair.t_little_s <= T::zero() || pair.t_big_s <= T::zero() {
            return Err(row_err(line, "times must be positive"));
        }
        out.push(pair);
    }
    Ok(out)
}

pub fn read_power_trace<T: Scalar, R: Read>(input: R) -> Result<Vec<PowerSample<T>>> {
    let (mut rows, _) = open(input, &TRACE_HEADER, &[])?;
    let mut out = Vec::new();
    while let Some(r) = rows.next() {
        let (line, rec) = r?;
        out.push(PowerSample {
            t_s: number(line, "t_s", &rec[0])?,
            power_w: number(line, "power_w", &rec[1])?,
        });
    }
    Ok(out)
}

pub fn read_references<T: Scalar, R: Read>(input: R) -> Result<Vec<ReferencePoint<T>>> {
    let (mut rows, _) = open(input, &REFERENCE_HEADER, &[])?;
    let mut out = Vec::new();
    while let Some(r) = rows.next() {
        let (line, rec) = r?;
        let point = ReferencePoint {
            label: rec[0].to_string(),
            time_s: number(line, "time_s", &rec[1])?,
            energy_j: number(line, "energy_j", &rec[2])?,
        };
        if point.time_s <= T::zero() || point.energy_j <= T::zero() {
            return Err(row_err(line, "reference time and energy must be positive"));
        }
        out.push(point);
    }
    if out.is_empty() {
        return Err(Error::Empty("reference file has no rows"));
    }
    Ok(out)
}
