//! CSV tables for curves and boundaries. Floats are written with 17
//! significant digits.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::boundaries::{BoundaryResult, BoundarySpec, BoundaryStatus};
use crate::error::Result;
use crate::metric::ErrorCurve;

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_curve<W: Write>(curve: &ErrorCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r_lambda", "epsilon"])?;
    for &(r, e) in &curve.points {
        w.write_record([float(r), float(e)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_boundaries<W: Write>(rows: &[(BoundarySpec, BoundaryResult)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "threshold", "status", "value_lambda", "crossings"])?;
    for (spec, res) in rows {
        let (status, value) = match res.status {
            BoundaryStatus::Found(v) => ("found", float(v)),
            BoundaryStatus::Unbounded => ("unbounded", String::new()),
            BoundaryStatus::NotFound => ("not-found", String::new()),
        };
        w.write_record([
            spec.kind.code().to_string(),
            spec.threshold.map(float).unwrap_or_default(),
            status.to_string(),
            value,
            res.crossings.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curve_file(curve: &ErrorCurve, path: &Path) -> Result<()> {
    write_curve(curve, std::io::BufWriter::new(fs::File::create(path)?))
}

pub fn write_boundaries_file(rows: &[(BoundarySpec, BoundaryResult)], path: &Path) -> Result<()> {
    write_boundaries(rows, std::io::BufWriter::new(fs::File::create(path)?))
}

/// Reads a `r_lambda,epsilon` table back.
pub fn read_curve(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in reader.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}
