//! CSV encoding of traces and sweep tables. Floats are written with 17
//! significant digits so that a read-back is bit-exact.

use std::io::{Read, Write};

use catscale::measures::RunTrace;
use catscale::sweep::{PointFlag, SweepPoint};
use catscale::SweepTable64;

use crate::error::{CliResult, Context, Failure, Kind};

pub const TRACE_HEADER: [&str; 5] = ["t", "k1_distance", "chi2_classical", "chi2_quantum", "d_chi2_quantum"];
pub const SWEEP_HEADER: [&str; 9] = [
    "N",
    "hbar",
    "D",
    "Lambda",
    "zeta",
    "k1_max",
    "d_chi2_max",
    "chi2_ratio",
    "flag",
];

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace<W: Write>(out: W, trace: &RunTrace<f64>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER).kind(Kind::Io, "writing trace header")?;
    for t in 0..=trace.steps() {
        w.write_record([
            t.to_string(),
            fmt_float(trace.k1_distance()[t]),
            fmt_float(trace.chi2_classical()[t]),
            fmt_float(trace.chi2_quantum()[t]),
            fmt_float(trace.d_chi2_quantum()[t]),
        ])
        .kind(Kind::Io, "writing trace row")?;
    }
    w.flush().kind(Kind::Io, "flushing trace")
}

pub fn write_sweep<W: Write>(out: W, table: &SweepTable64) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER).kind(Kind::Io, "writing sweep header")?;
    for p in &table.points {
        w.write_record([
            p.n.to_string(),
            fmt_float(p.hbar),
            fmt_float(p.d),
            fmt_float(p.rate),
            fmt_float(p.zeta),
            fmt_float(p.k1_max),
            fmt_float(p.d_chi2_max),
            fmt_float(p.chi2_ratio),
            p.flag.to_string(),
        ])
        .kind(Kind::Io, "writing sweep row")?;
    }
    w.flush().kind(Kind::Io, "flushing sweep table")
}

/// Table kinds recognized by their header.
#[derive(Debug, Clone, PartialEq)]
pub enum Loaded {
    Sweep(SweepTable64),
    Trace(Vec<[f64; 5]>),
}

fn malformed(line: u64, msg: impl std::fmt::Display) -> Failure {
    Failure::config(format!("malformed CSV at line {line}: {msg}"))
}

fn float(field: &str, line: u64, column: &str) -> CliResult<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| malformed(line, format!("column {column}: {field:?} is not a number")))
}

/// Parses a sweep or trace table. A header that matches neither, a short
/// row or an unparsable number is a config error.
pub fn read_table<R: Read>(input: R) -> CliResult<Loaded> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = r
        .headers()
        .map_err(|e| malformed(1, e))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    if header == SWEEP_HEADER {
        let mut points = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| malformed(e.position().map_or(0, |p| p.line()), e))?;
            let line = rec.position().map_or(0, |p| p.line());
            let get = |i: usize| float(&rec[i], line, SWEEP_HEADER[i]);
            let n = rec[0]
                .trim()
                .parse::<usize>()
                .map_err(|_| malformed(line, format!("column N: {:?} is not a dimension", &rec[0])))?;
            let flag: PointFlag = rec[8].parse().map_err(|e| malformed(line, e))?;
            points.push(SweepPoint {
                n,
                hbar: get(1)?,
                d: get(2)?,
                rate: get(3)?,
                zeta: get(4)?,
                k1_max: get(5)?,
                d_chi2_max: get(6)?,
                chi2_ratio: get(7)?,
                flag,
            });
        }
        Ok(Loaded::Sweep(SweepTable64::new(points)))
    } else if header == TRACE_HEADER {
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| malformed(e.position().map_or(0, |p| p.line()), e))?;
            let line = rec.position().map_or(0, |p| p.line());
            let mut row = [0.0; 5];
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = float(&rec[i], line, TRACE_HEADER[i])?;
            }
            rows.push(row);
        }
        Ok(Loaded::Trace(rows))
    } else {
        Err(malformed(
            1,
            format!("header {:?} is neither a sweep table nor a trace", header.join(",")),
        ))
    }
}
