//! Data tables behind the two figures: ε curves of dipole arrays under
//! beamsteering and beamfocusing, plus boundary markers.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::boundaries::{
    evaluate, BoundaryKind, BoundaryOptions, BoundaryResult, BoundarySpec, WorstCaseProfile,
};
use crate::error::{Error, Result};
use crate::grid::LogGrid;
use crate::harness::export::{write_boundaries_file, write_curve_file};
use crate::harness::trace::import_trace;
use crate::metric::{ArrayScenario, Excitation};
use crate::sources::ArrayGeometry;
use crate::wave::{Direction, WaveContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig4,
    Fig5,
}

impl Figure {
    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            _ => Err(Error::InvalidInput(format!("unknown figure '{s}' (expected fig4 or fig5)"))),
        }
    }
}

/// Default curve grid: 10⁻¹λ to 10⁴λ.
pub fn default_curve_grid(points_per_decade: u32) -> Result<LogGrid> {
    LogGrid::new(0.1, 1e4, points_per_decade)
}

const DIRECTIONS: [(u32, Direction); 3] = [(0, Direction::FRONT), (45, Direction::DIAGONAL), (90, Direction::SIDE)];

/// Boundary markers written for every array panel.
pub fn marker_specs() -> Vec<BoundarySpec> {
    use BoundaryKind::*;
    [
        (QuasiRayleigh, None),
        (ArrayRayleigh, None),
        (UniformPower, Some(0.9)),
        (UniformPower, Some(0.8)),
        (EffectiveNearField, Some(1.05)),
        (EffectiveNearField, Some(1.01)),
        (EquiPower, Some(0.99)),
        (EquiPower, Some(1.01)),
        (WorstCase, Some(0.001)),
        (WorstCase, Some(0.01)),
    ]
    .into_iter()
    .map(|(k, t)| match t {
        Some(t) => BoundarySpec::new(k, Some(t)).expect("valid marker threshold"),
        None => BoundarySpec::with_default(k),
    })
    .collect()
}

struct CurveJob {
    file: String,
    geometry: ArrayGeometry,
    excitation: Excitation,
    direction: Direction,
}

fn curve_jobs(figure: Figure) -> Result<Vec<CurveJob>> {
    let mut jobs = Vec::new();
    let arrays = |n: usize, d: f64, tag: String, jobs: &mut Vec<CurveJob>| -> Result<()> {
        let geometry = ArrayGeometry::ula_y(n, d)?;
        for (phi, direction) in DIRECTIONS {
            for excitation in [Excitation::FarFieldSteering, Excitation::NearFieldFocusing] {
                jobs.push(CurveJob {
                    file: format!("{}_{tag}_phi{phi}_{}.csv", figure.name(), excitation.label()),
                    geometry: geometry.clone(),
                    excitation,
                    direction,
                });
            }
        }
        Ok(())
    };
    match figure {
        Figure::Fig4 => {
            jobs.push(CurveJob {
                file: "fig4_n1_phi0_none.csv".into(),
                geometry: ArrayGeometry::ula_y(1, 0.5)?,
                excitation: Excitation::Uniform,
                direction: Direction::FRONT,
            });
            arrays(8, 0.5, "n8".into(), &mut jobs)?;
            arrays(64, 0.5, "n64".into(), &mut jobs)?;
        }
        Figure::Fig5 => {
            arrays(8, 0.5, "n8_d0.5".into(), &mut jobs)?;
            arrays(15, 0.25, "n15_d0.25".into(), &mut jobs)?;
        }
    }
    Ok(jobs)
}

fn boundary_panel(
    geometry: &ArrayGeometry,
    direction: &Direction,
    wc: &WorstCaseProfile<'_>,
    options: &BoundaryOptions,
) -> Result<Vec<(BoundarySpec, BoundaryResult)>> {
    let ctx = WaveContext::default();
    marker_specs()
        .into_iter()
        .map(|spec| {
            let res = match (spec.kind, spec.threshold) {
                (BoundaryKind::WorstCase, Some(t)) => wc.boundary(t, options.wc_wavelength_m)?,
                _ => evaluate(&spec, geometry, direction, &ctx, options)?,
            };
            Ok((spec, res))
        })
        .collect()
}

/// Writes the figure's tables into `out_dir` and returns the written paths
/// in a fixed order. Traces named `<figure>_*.csv` in `traces` are imported
/// and their ε curves written as `<figure>_trace_*.csv`.
pub fn reproduce_reference(
    figure: Figure,
    out_dir: &Path,
    traces: Option<&Path>,
    points_per_decade: Option<u32>,
) -> Result<Vec<PathBuf>> {
    let ctx = WaveContext::default();
    let grid = default_curve_grid(points_per_decade.unwrap_or(100))?.points();
    fs::create_dir_all(out_dir)?;

    let jobs = curve_jobs(figure)?;
    let mut written: Vec<PathBuf> = jobs
        .par_iter()
        .map(|job| {
            let r_hat = job.direction.unit_vector();
            let radii: Vec<f64> = grid
                .iter()
                .copied()
                .filter(|&r| job.geometry.check_clear(r_hat * r).is_ok())
                .collect();
            let scenario = ArrayScenario::new(job.geometry.clone(), job.excitation.clone());
            let curve = scenario.error_sweep(&job.direction, &radii)?;
            let path = out_dir.join(&job.file);
            write_curve_file(&curve, &path)?;
            Ok(path)
        })
        .collect::<Result<_>>()?;

    if figure == Figure::Fig4 {
        let options = BoundaryOptions::default();
        for n in [8usize, 64] {
            let geometry = ArrayGeometry::ula_y(n, 0.5)?;
            let wc = WorstCaseProfile::new(&geometry, &ctx, &options.grid)?;
            let panels: Vec<PathBuf> = DIRECTIONS
                .par_iter()
                .map(|(phi, direction)| {
                    let rows = boundary_panel(&geometry, direction, &wc, &options)?;
                    let path = out_dir.join(format!("fig4_n{n}_phi{phi}_boundaries.csv"));
                    write_boundaries_file(&rows, &path)?;
                    Ok(path)
                })
                .collect::<Result<_>>()?;
            written.extend(panels);
        }
    }

    if let Some(dir) = traces {
        let prefix = format!("{}_", figure.name());
        let mut inputs: Vec<PathBuf> = fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        inputs.retain(|p| {
            p.extension().is_some_and(|e| e == "csv")
                && p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with(&prefix))
        });
        inputs.sort();
        for input in inputs {
            let trace = import_trace(&input, &ctx)?;
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let name = format!("{}_trace_{}.csv", figure.name(), &stem[prefix.len()..]);
            let curve = trace.error_curve(&ctx, stem)?;
            let path = out_dir.join(name);
            write_curve_file(&curve, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}
