//! Scenario files: flat `key = value` lines, `#` starts a comment.
//!
//! ```text
//! # N = 8 ULA on the front line
//! source = dipole-ula
//! n = 8
//! spacing_lambda = 0.5
//! direction = front
//! excitation = ff-bf
//! boundaries = QR, AR, UP:0.9, EN:1.05
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::boundaries::{BoundarySpec, DEFAULT_WC_WAVELENGTH_M};
use crate::error::{Error, Result};
use crate::grid::LogGrid;
use crate::wave::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    DipoleUla,
    ImportedTrace,
}

impl FromStr for SourceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dipole-ula" => Ok(SourceKind::DipoleUla),
            "imported-trace" => Ok(SourceKind::ImportedTrace),
            _ => Err(format!("unknown source '{s}' (expected dipole-ula or imported-trace)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcitationKind {
    FarFieldSteering,
    NearFieldFocusing,
    /// Unit weights; the natural choice for single antennas.
    None,
}

impl ExcitationKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExcitationKind::FarFieldSteering => "ff-bf",
            ExcitationKind::NearFieldFocusing => "nf-bf",
            ExcitationKind::None => "none",
        }
    }
}

impl FromStr for ExcitationKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ff-bf" => Ok(ExcitationKind::FarFieldSteering),
            "nf-bf" => Ok(ExcitationKind::NearFieldFocusing),
            "none" | "single" => Ok(ExcitationKind::None),
            _ => Err(format!("unknown excitation '{s}' (expected ff-bf, nf-bf or none)")),
        }
    }
}

/// Parses a preset (`front`, `diagonal`, `side`) or `"theta,phi"` in degrees.
pub fn parse_direction(s: &str) -> std::result::Result<Direction, String> {
    match s.to_ascii_lowercase().as_str() {
        "front" => return Ok(Direction::FRONT),
        "diagonal" => return Ok(Direction::DIAGONAL),
        "side" => return Ok(Direction::SIDE),
        _ => {}
    }
    let (t, p) = s
        .split_once(',')
        .ok_or_else(|| format!("direction '{s}' is neither a preset nor 'theta,phi'"))?;
    let t: f64 = t.trim().parse().map_err(|_| format!("bad theta '{t}'"))?;
    let p: f64 = p.trim().parse().map_err(|_| format!("bad phi '{p}'"))?;
    Direction::from_degrees(t, p).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub source: SourceKind,
    pub n: usize,
    pub spacing: f64,
    pub direction: Direction,
    pub excitation: ExcitationKind,
    pub grid: LogGrid,
    pub boundaries: Vec<BoundarySpec>,
    /// Trace file for `imported-trace`, resolved against the config's directory.
    pub trace: Option<PathBuf>,
    pub wc_wavelength_m: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            source: SourceKind::DipoleUla,
            n: 1,
            spacing: 0.5,
            direction: Direction::FRONT,
            excitation: ExcitationKind::FarFieldSteering,
            grid: LogGrid {
                lo: 0.1,
                hi: 1e4,
                points_per_decade: 100,
            },
            boundaries: Vec::new(),
            trace: None,
            wc_wavelength_m: DEFAULT_WC_WAVELENGTH_M,
        }
    }
}

impl ScenarioConfig {
    /// Replaces the grid density, keeping the bracket.
    pub fn with_grid_ppd(mut self, ppd: u32) -> Result<Self> {
        self.grid = LogGrid::new(self.grid.lo, self.grid.hi, ppd)?;
        Ok(self)
    }
}

pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)?;
    parse_scenario(&text, path)
}

/// Parses scenario text; `path` is used for diagnostics and to resolve a
/// relative `trace` path.
pub fn parse_scenario(text: &str, path: &Path) -> Result<ScenarioConfig> {
    let err = |line: usize, message: String| Error::Config {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut cfg = ScenarioConfig::default();
    let (mut lo, mut hi, mut ppd) = (cfg.grid.lo, cfg.grid.hi, cfg.grid.points_per_decade);
    let mut seen: Vec<String> = Vec::new();
    let mut grid_line = 0;
    let mut excitation_line = 0;
    let mut boundaries_line = 0;
    let mut trace_line = 0;
    let mut ula_keys = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|k| k == key) {
            return Err(err(line_no, format!("duplicate key '{key}'")));
        }
        seen.push(key.to_string());

        fn num<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("{key}: cannot parse '{value}'"))
        }
        let parsed: std::result::Result<(), String> = (|| {
            match key {
                "source" => cfg.source = value.parse()?,
                "n" => {
                    cfg.n = num(key, value)?;
                    ula_keys = true;
                }
                "spacing_lambda" => {
                    cfg.spacing = num(key, value)?;
                    ula_keys = true;
                }
                "direction" => cfg.direction = parse_direction(value)?,
                "excitation" => {
                    cfg.excitation = value.parse()?;
                    excitation_line = line_no;
                }
                "grid_lo" => {
                    lo = num(key, value)?;
                    grid_line = line_no;
                }
                "grid_hi" => {
                    hi = num(key, value)?;
                    grid_line = line_no;
                }
                "grid_ppd" => {
                    ppd = num(key, value)?;
                    grid_line = line_no;
                }
                "boundaries" => {
                    cfg.boundaries = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<BoundarySpec>().map_err(|e| e.to_string()))
                        .collect::<std::result::Result<_, _>>()?;
                    boundaries_line = line_no;
                }
                "trace" => {
                    let p = PathBuf::from(value);
                    cfg.trace = Some(if p.is_relative() {
                        path.parent().unwrap_or(Path::new("")).join(p)
                    } else {
                        p
                    });
                    trace_line = line_no;
                }
                "wc_wavelength_m" => {
                    let v: f64 = num(key, value)?;
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(format!("wc_wavelength_m must be positive, got {v}"));
                    }
                    cfg.wc_wavelength_m = v;
                }
                _ => return Err(format!("unknown key '{key}'")),
            }
            Ok(())
        })();
        parsed.map_err(|m| err(line_no, m))?;
    }

    cfg.grid = LogGrid::new(lo, hi, ppd).map_err(|e| err(grid_line, e.to_string()))?;

    match cfg.source {
        SourceKind::DipoleUla => {
            if cfg.n == 0 {
                return Err(err(0, "n must be at least 1".into()));
            }
            if !(cfg.spacing > 0.0 && cfg.spacing.is_finite()) {
                return Err(err(0, format!("spacing_lambda must be positive, got {}", cfg.spacing)));
            }
            if cfg.trace.is_some() {
                return Err(err(trace_line, "trace is only valid with source = imported-trace".into()));
            }
        }
        SourceKind::ImportedTrace => {
            if cfg.excitation == ExcitationKind::NearFieldFocusing {
                return Err(err(
                    excitation_line,
                    "nf-bf needs a dipole-ula source; imported traces fix their excitation".into(),
                ));
            }
            if cfg.trace.is_none() {
                return Err(err(0, "imported-trace needs a 'trace' key".into()));
            }
            if ula_keys {
                return Err(err(0, "n and spacing_lambda do not apply to imported-trace".into()));
            }
            if !cfg.boundaries.is_empty() {
                return Err(err(
                    boundaries_line,
                    "boundaries need an array geometry and are not available for imported-trace".into(),
                ));
            }
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundaries::BoundaryKind;

    fn parse(text: &str) -> Result<ScenarioConfig> {
        parse_scenario(text, Path::new("/cfg/scenario.txt"))
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse("n = 8\nspacing_lambda = 0.5\ndirection = front\nexcitation = ff-bf\n").unwrap();
        assert_eq!(cfg.n, 8);
        assert_eq!(cfg.grid, LogGrid { lo: 0.1, hi: 1e4, points_per_decade: 100 });
        assert_eq!(cfg.source, SourceKind::DipoleUla);
        assert_eq!(cfg.direction, Direction::FRONT);
        assert!(cfg.boundaries.is_empty());
    }

    #[test]
    fn full_config() {
        let cfg = parse(
            "# comment\nsource = dipole-ula\nn = 64 # trailing\nspacing_lambda=0.25\n\
             direction = 90,45\nexcitation = NF-BF\ngrid_lo = 1\ngrid_hi = 100\ngrid_ppd = 10\n\
             boundaries = QR, UP:0.8, WC\nwc_wavelength_m = 0.01\n",
        )
        .unwrap();
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.excitation, ExcitationKind::NearFieldFocusing);
        assert!((cfg.direction.phi_deg() - 45.0).abs() < 1e-12);
        assert_eq!(cfg.grid.points().len(), 21);
        assert_eq!(cfg.boundaries.len(), 3);
        assert_eq!(cfg.boundaries[1].kind, BoundaryKind::UniformPower);
        assert_eq!(cfg.boundaries[1].threshold, Some(0.8));
        assert_eq!(cfg.wc_wavelength_m, 0.01);
    }

    #[test]
    fn nf_on_imported_trace_rejected() {
        let e = parse("source = imported-trace\ntrace = t.csv\nexcitation = nf-bf\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 3, .. }), "{e}");
    }

    #[test]
    fn trace_path_resolved_against_config() {
        let cfg = parse("source = imported-trace\ntrace = t.csv\n").unwrap();
        assert_eq!(cfg.trace.as_deref(), Some(Path::new("/cfg/t.csv")));
    }

    #[test]
    fn unknown_key_named() {
        let e = parse("n = 8\nfrequency = 28e9\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("frequency") && msg.contains(":2:"), "{msg}");
    }

    #[test]
    fn bad_values_carry_line_numbers() {
        for (text, line) in [
            ("n = eight\n", 1),
            ("n = 8\ndirection = up\n", 2),
            ("boundaries = QR, XX\n", 1),
            ("grid_lo = 10\ngrid_hi = 1\n", 2),
            ("n = 8\nn = 9\n", 2),
            ("just words\n", 1),
        ] {
            match parse(text) {
                Err(Error::Config { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn ppd_override() {
        let cfg = parse("n = 2\n").unwrap().with_grid_ppd(10).unwrap();
        assert_eq!(cfg.grid.points().len(), 51);
        assert!(parse("n = 2\n").unwrap().with_grid_ppd(0).is_err());
    }
}
