//! Field-mismatch metric and the approximation error ε(r) along a test line.
//!
//! Fields are stacked as `F = [Z0^{−1/2}·E; Z0^{1/2}·H]` so that electric and
//! magnetic deviations carry equal weight, and
//!
//! ```text
//! μ = (‖F − F_FF‖ / (‖F‖ + ‖F_FF‖))²,   μ = 0 when F = F_FF = 0.
//! ```

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::farfield::{
    analytic_angular_distribution, auxiliary_fields, sample_angular_distribution,
    AngularFieldDistribution,
};
use crate::grid::check_increasing;
use crate::sources::{
    array_field, ff_precoder, nf_precoder, ArrayGeometry, DrivenArray, ExcitationVector, FieldSample,
};
use crate::wave::{Direction, SphericalPoint, WaveContext};

/// Impedance-normalised 6-component field vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackedField(pub [Complex64; 6]);

impl StackedField {
    pub fn new(sample: &FieldSample, z0: f64) -> Self {
        let a = 1.0 / z0.sqrt();
        let b = z0.sqrt();
        let [e0, e1, e2] = sample.e.0;
        let [h0, h1, h2] = sample.h.0;
        Self([e0 * a, e1 * a, e2 * a, h0 * b, h1 * b, h2 * b])
    }

    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .fold(0.0_f64, |acc, c| acc.hypot(c.re).hypot(c.im))
    }

    fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0_f64, |acc, (a, b)| {
                let d = a - b;
                acc.hypot(d.re).hypot(d.im)
            })
    }
}

/// Squared normalised distance between two stacked fields, in `[0, 1]`.
pub fn field_mismatch(actual: &StackedField, approx: &StackedField) -> f64 {
    let denom = actual.norm() + approx.norm();
    if denom == 0.0 {
        return 0.0;
    }
    let ratio = actual.distance(approx) / denom;
    (ratio * ratio).min(1.0)
}

/// μ(E, H; E_FF, H_FF).
pub fn sample_mismatch(actual: &FieldSample, approx: &FieldSample, ctx: &WaveContext) -> f64 {
    field_mismatch(
        &StackedField::new(actual, ctx.z0()),
        &StackedField::new(approx, ctx.z0()),
    )
}

/// How the array is driven along the test line.
#[derive(Debug, Clone, PartialEq)]
pub enum Excitation {
    /// Unit weights (single antennas).
    Uniform,
    /// Beamsteering toward the test-line direction.
    FarFieldSteering,
    /// Beamfocusing on each evaluated point; `f` is re-derived per point.
    NearFieldFocusing,
    Fixed(ExcitationVector),
}

impl Excitation {
    pub fn label(&self) -> &'static str {
        match self {
            Excitation::Uniform => "none",
            Excitation::FarFieldSteering => "ff-bf",
            Excitation::NearFieldFocusing => "nf-bf",
            Excitation::Fixed(_) => "fixed",
        }
    }
}

/// Where the angular field distribution comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FarFieldMode {
    Analytic,
    /// Numerical extraction from a sample at the given radius (λ).
    Sampled(f64),
}

/// A coupling-free dipole array under a given excitation scheme.
#[derive(Debug, Clone)]
pub struct ArrayScenario {
    pub geometry: ArrayGeometry,
    pub excitation: Excitation,
    pub far_field: FarFieldMode,
    pub ctx: WaveContext,
}

impl ArrayScenario {
    pub fn new(geometry: ArrayGeometry, excitation: Excitation) -> Self {
        Self {
            geometry,
            excitation,
            far_field: FarFieldMode::Analytic,
            ctx: WaveContext::default(),
        }
    }

    fn weights(&self, point: &SphericalPoint) -> Result<ExcitationVector> {
        match &self.excitation {
            Excitation::Uniform => Ok(ExcitationVector::uniform(self.geometry.len())),
            Excitation::FarFieldSteering => Ok(ff_precoder(&self.geometry, &point.direction, &self.ctx)),
            Excitation::NearFieldFocusing => nf_precoder(&self.geometry, point.to_cartesian(), &self.ctx),
            Excitation::Fixed(w) => Ok(w.clone()),
        }
    }

    fn angular_distribution(
        &self,
        w: &ExcitationVector,
        direction: &Direction,
    ) -> Result<AngularFieldDistribution> {
        match self.far_field {
            FarFieldMode::Analytic => analytic_angular_distribution(&self.geometry, w, direction, &self.ctx),
            FarFieldMode::Sampled(r_ff) => {
                let src = DrivenArray {
                    geometry: &self.geometry,
                    weights: w.clone(),
                };
                Ok(sample_angular_distribution(&src, direction, r_ff, &self.ctx)?.distribution)
            }
        }
    }

    fn error_with(
        &self,
        w: &ExcitationVector,
        f: &AngularFieldDistribution,
        point: &SphericalPoint,
    ) -> Result<f64> {
        let actual = array_field(&self.geometry, w, point.to_cartesian(), &self.ctx)?;
        let approx = auxiliary_fields(f, point, &self.ctx)?;
        Ok(sample_mismatch(&actual, &approx, &self.ctx))
    }

    /// ε at one point of a test line.
    pub fn approximation_error(&self, point: &SphericalPoint) -> Result<f64> {
        if !(point.r > 0.0) {
            return Err(Error::InvalidInput("approximation error needs r > 0".into()));
        }
        let w = self.weights(point)?;
        let f = self.angular_distribution(&w, &point.direction)?;
        self.error_with(&w, &f, point)
    }

    /// ε on every grid radius along `direction`, in grid order.
    pub fn error_sweep(&self, direction: &Direction, grid: &[f64]) -> Result<ErrorCurve> {
        check_increasing(grid)?;
        let r_hat = direction.unit_vector();
        for &r in grid {
            if let Err(Error::Singularity { distance, .. }) = self.geometry.check_clear(r_hat * r) {
                return Err(Error::InvalidInput(format!(
                    "grid radius {r} lies on an array element (distance {distance:e})"
                )));
            }
        }
        let fixed = match self.excitation {
            Excitation::NearFieldFocusing => None,
            _ => {
                let probe = SphericalPoint::new(1.0, *direction)?;
                let w = self.weights(&probe)?;
                let f = self.angular_distribution(&w, direction)?;
                Some((w, f))
            }
        };
        let values = grid
            .par_iter()
            .map(|&r| {
                let point = SphericalPoint::new(r, *direction)?;
                match &fixed {
                    Some((w, f)) => self.error_with(w, f, &point),
                    None => self.approximation_error(&point),
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(ErrorCurve {
            points: grid.iter().copied().zip(values).collect(),
            meta: CurveMeta {
                direction: *direction,
                excitation: self.excitation.label().to_string(),
                source: format!("dipole-ula n={} d={}", self.geometry.len(), self.geometry.spacing()),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub direction: Direction,
    pub excitation: String,
    pub source: String,
}

/// ε sampled along a test line, ascending in r.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub points: Vec<(f64, f64)>,
    pub meta: CurveMeta,
}

impl ErrorCurve {
    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl fmt::Display for ErrorCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] at ({:.1}°, {:.1}°), {} points",
            self.meta.source,
            self.meta.excitation,
            self.meta.direction.theta_deg(),
            self.meta.direction.phi_deg(),
            self.points.len()
        )
    }
}
