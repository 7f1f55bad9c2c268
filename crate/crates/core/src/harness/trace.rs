//! Field traces: E and H sampled along one test line, with an inline
//! far-field record.
//!
//! ```text
//! # nff_trace_version = 1
//! # direction = 90,0
//! # ff_f = re,im,re,im,re,im
//! # ff_sample = r_ff,ex_re,ex_im,...,hz_im
//! r_lambda,ex_re,ex_im,ey_re,ey_im,ez_re,ez_im,hx_re,hx_im,hy_re,hy_im,hz_re,hz_im
//! 0.1,...
//! ```
//!
//! At least one of `ff_f` and `ff_sample` must be present. A sample always
//! goes through the E/H cross-check; when both are present `ff_f` defines
//! the auxiliary fields.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::farfield::{
    analytic_angular_distribution, angular_distribution_from_sample, auxiliary_fields,
    AngularFieldDistribution,
};
use crate::metric::{sample_mismatch, CurveMeta, ErrorCurve};
use crate::sources::{array_field, ArrayGeometry, ExcitationVector, FieldSample};
use crate::wave::{CVec3, Direction, SphericalPoint, WaveContext};

pub const TRACE_VERSION: u32 = 1;

pub const TRACE_COLUMNS: [&str; 13] = [
    "r_lambda", "ex_re", "ex_im", "ey_re", "ey_im", "ez_re", "ez_im", "hx_re", "hx_im", "hy_re",
    "hy_im", "hz_re", "hz_im",
];

/// Tolerated radial fraction `|r̂·f|/‖f‖` of an `ff_f` record.
const RADIAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub r: f64,
    pub sample: FieldSample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTrace {
    pub direction: Direction,
    pub ff_f: Option<CVec3>,
    pub ff_sample: Option<(f64, FieldSample)>,
    pub rows: Vec<TraceRow>,
}

fn sample_values(s: &FieldSample) -> [f64; 12] {
    let mut out = [0.0; 12];
    for (i, c) in s.e.0.iter().chain(s.h.0.iter()).enumerate() {
        out[2 * i] = c.re;
        out[2 * i + 1] = c.im;
    }
    out
}

fn sample_from(v: &[f64]) -> FieldSample {
    let c = |i: usize| Complex64::new(v[2 * i], v[2 * i + 1]);
    FieldSample {
        e: CVec3([c(0), c(1), c(2)]),
        h: CVec3([c(3), c(4), c(5)]),
    }
}

fn floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("cannot parse '{}'", t.trim())))
        .collect()
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl FieldTrace {
    /// Samples a driven dipole array along `direction` and attaches the
    /// analytic `f`, plus a far-field sample at `sample_radius` if given.
    pub fn synthesize(
        geometry: &ArrayGeometry,
        weights: &ExcitationVector,
        direction: &Direction,
        radii: &[f64],
        sample_radius: Option<f64>,
        ctx: &WaveContext,
    ) -> Result<Self> {
        let r_hat = direction.unit_vector();
        let rows = radii
            .iter()
            .map(|&r| {
                Ok(TraceRow {
                    r,
                    sample: array_field(geometry, weights, r_hat * r, ctx)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let f = analytic_angular_distribution(geometry, weights, direction, ctx)?.f;
        let ff_sample = match sample_radius {
            Some(r_ff) => Some((r_ff, array_field(geometry, weights, r_hat * r_ff, ctx)?)),
            None => None,
        };
        let trace = Self {
            direction: *direction,
            ff_f: Some(f),
            ff_sample,
            rows,
        };
        trace.validate(ctx)?;
        Ok(trace)
    }

    /// Checks ordering, finiteness and the far-field record.
    pub fn validate(&self, ctx: &WaveContext) -> Result<AngularFieldDistribution> {
        if self.rows.is_empty() {
            return Err(Error::InvalidInput("trace has no data rows".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !(row.r > 0.0) || !row.r.is_finite() {
                return Err(Error::InvalidInput(format!("row {}: r = {} must be positive", i + 1, row.r)));
            }
            if sample_values(&row.sample).iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("row {}: non-finite field value", i + 1)));
            }
        }
        if let Some(w) = self.rows.windows(2).position(|w| !(w[1].r > w[0].r)) {
            return Err(Error::InvalidInput(format!(
                "r is not strictly increasing at row {} ({} after {})",
                w + 2,
                self.rows[w + 1].r,
                self.rows[w].r
            )));
        }
        self.far_field(ctx)
    }

    /// Angular field distribution defined by the far-field record.
    pub fn far_field(&self, ctx: &WaveContext) -> Result<AngularFieldDistribution> {
        let sampled = match &self.ff_sample {
            Some((r_ff, s)) => {
                if sample_values(s).iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput("ff_sample has non-finite values".into()));
                }
                Some(angular_distribution_from_sample(s, &self.direction, *r_ff, ctx)?)
            }
            None => None,
        };
        match (self.ff_f, sampled) {
            (None, None) => Err(Error::InvalidInput("trace has no far-field record".into())),
            (None, Some(s)) => Ok(s.distribution),
            (Some(f), _) => {
                if !f.is_finite() {
                    return Err(Error::InvalidInput("ff_f has non-finite values".into()));
                }
                let dist = AngularFieldDistribution {
                    direction: self.direction,
                    f,
                };
                let radial = dist.radial_fraction();
                if radial > RADIAL_TOLERANCE {
                    return Err(Error::InconsistentFarField {
                        discrepancy: radial,
                        tolerance: RADIAL_TOLERANCE,
                    });
                }
                Ok(dist)
            }
        }
    }

    /// ε at every trace row.
    pub fn error_curve(&self, ctx: &WaveContext, source: &str) -> Result<ErrorCurve> {
        let f = self.validate(ctx)?;
        let points = self
            .rows
            .iter()
            .map(|row| {
                let p = SphericalPoint::new(row.r, self.direction)?;
                let approx = auxiliary_fields(&f, &p, ctx)?;
                Ok((row.r, sample_mismatch(&row.sample, &approx, ctx)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ErrorCurve {
            points,
            meta: CurveMeta {
                direction: self.direction,
                excitation: "fixed".into(),
                source: source.to_string(),
            },
        })
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        writeln!(out, "# nff_trace_version = {TRACE_VERSION}")?;
        writeln!(
            out,
            "# direction = {:.16e},{:.16e}",
            self.direction.theta_deg(),
            self.direction.phi_deg()
        )?;
        if let Some(f) = &self.ff_f {
            let v: Vec<f64> = f.0.iter().flat_map(|c| [c.re, c.im]).collect();
            writeln!(out, "# ff_f = {}", join(&v))?;
        }
        if let Some((r_ff, s)) = &self.ff_sample {
            let mut v = vec![*r_ff];
            v.extend(sample_values(s));
            writeln!(out, "# ff_sample = {}", join(&v))?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRACE_COLUMNS)?;
        for row in &self.rows {
            let mut rec = vec![format!("{:.16e}", row.r)];
            rec.extend(sample_values(&row.sample).iter().map(|v| format!("{v:.16e}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }

    /// Parses trace text without validating it.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let bad = |message: String| Error::Trace {
            path: path.to_path_buf(),
            message,
        };
        let mut version = None;
        let mut direction = None;
        let mut ff_f = None;
        let mut ff_sample = None;
        for (i, line) in text.lines().enumerate() {
            let Some(body) = line.trim_start().strip_prefix('#') else {
                continue;
            };
            let Some((key, value)) = body.split_once('=') else {
                continue;
            };
            let at = |m: String| bad(format!("line {}: {m}", i + 1));
            match key.trim() {
                "nff_trace_version" => {
                    version = Some(value.trim().parse::<u32>().map_err(|_| at(format!("bad version '{}'", value.trim())))?)
                }
                "direction" => {
                    let v = floats(value).map_err(at)?;
                    if v.len() != 2 {
                        return Err(at("direction needs theta,phi".into()));
                    }
                    direction = Some(Direction::from_degrees(v[0], v[1]).map_err(|e| at(e.to_string()))?);
                }
                "ff_f" => {
                    let v = floats(value).map_err(at)?;
                    if v.len() != 6 {
                        return Err(at(format!("ff_f needs 6 values, got {}", v.len())));
                    }
                    let c = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
                    ff_f = Some(CVec3([c(0), c(1), c(2)]));
                }
                "ff_sample" => {
                    let v = floats(value).map_err(at)?;
                    if v.len() != 13 {
                        return Err(at(format!("ff_sample needs 13 values, got {}", v.len())));
                    }
                    ff_sample = Some((v[0], sample_from(&v[1..])));
                }
                other => return Err(at(format!("unknown header key '{other}'"))),
            }
        }
        match version {
            Some(TRACE_VERSION) => {}
            Some(v) => return Err(bad(format!("unsupported trace version {v}"))),
            None => return Err(bad("missing '# nff_trace_version' header".into())),
        }
        let direction = direction.ok_or_else(|| bad("missing '# direction' header".into()))?;

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = reader.headers()?.clone();
        if header.iter().ne(TRACE_COLUMNS.iter().copied()) {
            return Err(bad(format!(
                "data header must be '{}', got '{}'",
                TRACE_COLUMNS.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let v: Vec<f64> = rec
                .iter()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(format!("data row {}: non-numeric value", i + 1)))?;
            rows.push(TraceRow {
                r: v[0],
                sample: sample_from(&v[1..]),
            });
        }
        Ok(Self {
            direction,
            ff_f,
            ff_sample,
            rows,
        })
    }
}

/// Reads and validates a trace file, including the far-field cross-check.
pub fn import_trace(path: &Path, ctx: &WaveContext) -> Result<FieldTrace> {
    let text = fs::read_to_string(path)?;
    let trace = FieldTrace::parse(&text, path)?;
    trace.validate(ctx).map_err(|e| match e {
        Error::InvalidInput(message) => Error::Trace {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })?;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farfield::DEFAULT_SAMPLE_RADIUS;
    use crate::sources::ff_precoder;

    fn synth() -> FieldTrace {
        let ctx = WaveContext::default();
        let g = ArrayGeometry::ula_y(4, 0.5).unwrap();
        let w = ff_precoder(&g, &Direction::DIAGONAL, &ctx);
        FieldTrace::synthesize(
            &g,
            &w,
            &Direction::DIAGONAL,
            &[0.3, 1.0, 10.0, 100.0],
            Some(DEFAULT_SAMPLE_RADIUS),
            &ctx,
        )
        .unwrap()
    }

    fn text_of(t: &FieldTrace) -> String {
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let t = synth();
        let back = FieldTrace::parse(&text_of(&t), Path::new("t.csv")).unwrap();
        assert_eq!(back.rows, t.rows);
        assert_eq!(back.ff_f, t.ff_f);
        assert_eq!(back.ff_sample, t.ff_sample);
        assert!((back.direction.theta() - t.direction.theta()).abs() < 1e-15);
    }

    #[test]
    fn header_lines() {
        let text = text_of(&synth());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# nff_trace_version = 1");
        assert!(lines[1].starts_with("# direction = "));
        assert!(lines[2].starts_with("# ff_f = "));
        assert!(lines[3].starts_with("# ff_sample = "));
        assert_eq!(lines[4], TRACE_COLUMNS.join(","));
        assert_eq!(lines.len(), 9);
    }

    #[test]
    fn scaled_h_is_inconsistent() {
        let ctx = WaveContext::default();
        let mut t = synth();
        t.ff_f = None;
        let (r, s) = t.ff_sample.unwrap();
        t.ff_sample = Some((r, FieldSample { e: s.e, h: s.h * 2.0 }));
        assert!(matches!(t.validate(&ctx), Err(Error::InconsistentFarField { .. })));
    }

    #[test]
    fn radial_ff_f_rejected() {
        let ctx = WaveContext::default();
        let mut t = synth();
        t.ff_sample = None;
        let r_hat = t.direction.unit_vector();
        t.ff_f = t.ff_f.map(|f| f + CVec3::from_real(r_hat, Complex64::new(0.01 * f.norm(), 0.0)));
        assert!(matches!(t.validate(&ctx), Err(Error::InconsistentFarField { .. })));
    }

    #[test]
    fn shuffled_rows_rejected() {
        let ctx = WaveContext::default();
        let mut t = synth();
        t.rows.swap(1, 2);
        let e = t.validate(&ctx).unwrap_err();
        assert!(e.to_string().contains("increasing"), "{e}");
    }

    #[test]
    fn schema_errors() {
        let good = text_of(&synth());
        let p = Path::new("t.csv");
        for broken in [
            good.replace("# nff_trace_version = 1\n", ""),
            good.replace("nff_trace_version = 1", "nff_trace_version = 2"),
            good.replace("r_lambda,", "radius,"),
            good.replacen("# direction", "# heading", 1),
        ] {
            assert!(matches!(FieldTrace::parse(&broken, p), Err(Error::Trace { .. })), "{broken}");
        }
        let missing_col: String = good
            .lines()
            .map(|l| if l.starts_with('1') { &l[..l.rfind(',').unwrap()] } else { l })
            .collect::<Vec<_>>()
            .join("\n");
        assert!(FieldTrace::parse(&missing_col, p).is_err());
    }
}
