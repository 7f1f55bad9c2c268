//! Scenario files, sweeps, trace import/export and figure reproduction.

pub mod config;
pub mod export;
pub mod reproduce;
pub mod trace;

pub use config::{load_scenario, parse_scenario, ExcitationKind, ScenarioConfig, SourceKind};
pub use export::{read_curve, write_boundaries, write_boundaries_file, write_curve, write_curve_file};
pub use reproduce::{reproduce_reference, Figure};
pub use trace::{import_trace, FieldTrace, TraceRow};

use crate::boundaries::{evaluate, BoundaryOptions, BoundaryResult, BoundarySpec};
use crate::error::{Error, Result};
use crate::metric::{ArrayScenario, ErrorCurve, Excitation};
use crate::sources::ArrayGeometry;
use crate::wave::WaveContext;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub curve: ErrorCurve,
    pub boundaries: Vec<(BoundarySpec, BoundaryResult)>,
}

fn excitation(kind: ExcitationKind) -> Excitation {
    match kind {
        ExcitationKind::FarFieldSteering => Excitation::FarFieldSteering,
        ExcitationKind::NearFieldFocusing => Excitation::NearFieldFocusing,
        ExcitationKind::None => Excitation::Uniform,
    }
}

/// The ε curve on the configured grid plus every configured boundary.
pub fn run_sweep(config: &ScenarioConfig) -> Result<SweepResult> {
    let ctx = WaveContext::default();
    match config.source {
        SourceKind::DipoleUla => {
            let geometry = ArrayGeometry::ula_y(config.n, config.spacing)?;
            let scenario = ArrayScenario::new(geometry, excitation(config.excitation));
            let curve = scenario.error_sweep(&config.direction, &config.grid.points())?;
            let boundaries = evaluate_boundaries(&scenario.geometry, config, &config.boundaries)?;
            Ok(SweepResult { curve, boundaries })
        }
        SourceKind::ImportedTrace => {
            let path = config
                .trace
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("imported-trace scenario without a trace".into()))?;
            let trace = import_trace(path, &ctx)?;
            let curve = trace.error_curve(&ctx, &path.display().to_string())?;
            Ok(SweepResult {
                curve,
                boundaries: Vec::new(),
            })
        }
    }
}

/// Evaluates `specs` for the dipole array of `config`, in order.
pub fn evaluate_boundaries(
    geometry: &ArrayGeometry,
    config: &ScenarioConfig,
    specs: &[BoundarySpec],
) -> Result<Vec<(BoundarySpec, BoundaryResult)>> {
    let ctx = WaveContext::default();
    let options = BoundaryOptions {
        wc_wavelength_m: config.wc_wavelength_m,
        ..BoundaryOptions::default()
    };
    specs
        .iter()
        .map(|spec| Ok((*spec, evaluate(spec, geometry, &config.direction, &ctx, &options)?)))
        .collect()
}
