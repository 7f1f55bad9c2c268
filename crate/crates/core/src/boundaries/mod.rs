//! Near–far-field boundary evaluators.
//!
//! | kind | definition                                   | default threshold |
//! |------|----------------------------------------------|-------------------|
//! | QR   | `2·D²/λ`                                     | –                 |
//! | AR   | `inf {r : Φ(r) ≤ π/8}`                       | π/8               |
//! | UP   | `inf {r : Γ(r) ≥ Γ_th}`                      | 0.9               |
//! | EN   | `sup {r : Ψ(r) ≥ Ψ_th}`                      | 1.05              |
//! | EP   | `sup {r : Υ(r) ≤ Υ_th}`                      | 0.99              |
//! | WC   | `inf {r : sup_{r' ≥ r} Ξ(r') < Ξ_th}`        | 0.001 m⁻¹         |
//!
//! When the defining indicator crosses its threshold more than once, EN and
//! EP take the last crossing.

mod measures;
mod search;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use measures::{
    collinear_coordinates, element_mismatch, element_worst_mismatch, gamma_uniform_power,
    phi_excess, psi_gain_ratio, upsilon_power, xi_worst_mismatch, PHASE_ERROR_LIMIT,
    XI_GRID_POINTS,
};
pub use search::{
    bisect, find_first, find_first_above, find_first_below, find_last, find_last_above,
    find_last_below, BoundaryResult, BoundaryStatus, SearchGrid, BISECTION_RTOL,
};

use crate::error::{Error, Result};
use crate::sources::ArrayGeometry;
use crate::wave::{Direction, SphericalPoint, WaveContext};

/// Physical wavelength (m) at which the worst-case mismatch threshold is
/// interpreted: 10 GHz.
pub const DEFAULT_WC_WAVELENGTH_M: f64 = 299_792_458.0 / 10e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryKind {
    QuasiRayleigh,
    ArrayRayleigh,
    UniformPower,
    EffectiveNearField,
    EquiPower,
    WorstCase,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 6] = [
        BoundaryKind::QuasiRayleigh,
        BoundaryKind::ArrayRayleigh,
        BoundaryKind::UniformPower,
        BoundaryKind::EffectiveNearField,
        BoundaryKind::EquiPower,
        BoundaryKind::WorstCase,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            BoundaryKind::QuasiRayleigh => "QR",
            BoundaryKind::ArrayRayleigh => "AR",
            BoundaryKind::UniformPower => "UP",
            BoundaryKind::EffectiveNearField => "EN",
            BoundaryKind::EquiPower => "EP",
            BoundaryKind::WorstCase => "WC",
        }
    }

    pub fn default_threshold(&self) -> Option<f64> {
        match self {
            BoundaryKind::QuasiRayleigh => None,
            BoundaryKind::ArrayRayleigh => Some(PHASE_ERROR_LIMIT),
            BoundaryKind::UniformPower => Some(0.9),
            BoundaryKind::EffectiveNearField => Some(1.05),
            BoundaryKind::EquiPower => Some(0.99),
            BoundaryKind::WorstCase => Some(0.001),
        }
    }

    /// Whether the boundary depends on the test-line direction.
    pub fn is_directional(&self) -> bool {
        !matches!(self, BoundaryKind::QuasiRayleigh | BoundaryKind::WorstCase)
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundaryKind::ALL
            .into_iter()
            .find(|k| k.code().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown boundary kind '{s}'")))
    }
}

/// A boundary kind together with its threshold (if any).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec {
    pub kind: BoundaryKind,
    pub threshold: Option<f64>,
}

impl BoundarySpec {
    pub fn new(kind: BoundaryKind, threshold: Option<f64>) -> Result<Self> {
        let threshold = match (kind, threshold) {
            (BoundaryKind::QuasiRayleigh, Some(_)) => {
                return Err(Error::InvalidInput("QR takes no threshold".into()))
            }
            (_, Some(t)) => Some(t),
            (k, None) => k.default_threshold(),
        };
        if let Some(t) = threshold {
            let ok = match kind {
                BoundaryKind::UniformPower => t > 0.0 && t < 1.0,
                _ => t > 0.0 && t.is_finite(),
            };
            if !ok {
                return Err(Error::InvalidInput(format!("threshold {t} out of range for {kind}")));
            }
        }
        Ok(Self { kind, threshold })
    }

    pub fn with_default(kind: BoundaryKind) -> Self {
        Self {
            kind,
            threshold: kind.default_threshold(),
        }
    }
}

impl FromStr for BoundarySpec {
    type Err = Error;

    /// `KIND` or `KIND:threshold`, e.g. `UP:0.8`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None => Ok(BoundarySpec::with_default(s.parse()?)),
            Some((kind, th)) => {
                let kind: BoundaryKind = kind.parse()?;
                let th: f64 = th
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad threshold '{th}' for {kind}")))?;
                BoundarySpec::new(kind, Some(th))
            }
        }
    }
}

impl fmt::Display for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.threshold {
            Some(t) => write!(f, "{}:{}", self.kind, t),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// Knobs shared by all searched boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryOptions {
    pub grid: SearchGrid,
    /// Physical wavelength (m) for the worst-case mismatch threshold.
    pub wc_wavelength_m: f64,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        Self {
            grid: SearchGrid::default(),
            wc_wavelength_m: DEFAULT_WC_WAVELENGTH_M,
        }
    }
}

fn degenerate(geometry: &ArrayGeometry, mut res: BoundaryResult) -> BoundaryResult {
    res.degenerate = geometry.len() < 2;
    res
}

/// `2·D²/λ`.
pub fn quasi_rayleigh(largest_dimension: f64, ctx: &WaveContext) -> f64 {
    2.0 * largest_dimension * largest_dimension / ctx.wavelength()
}

pub fn d_qr(geometry: &ArrayGeometry, ctx: &WaveContext) -> BoundaryResult {
    let d = geometry.largest_dimension();
    BoundaryResult::closed_form(quasi_rayleigh(d, ctx), d == 0.0)
}

pub fn d_ar(
    geometry: &ArrayGeometry,
    direction: &Direction,
    ctx: &WaveContext,
    threshold: f64,
    grid: &SearchGrid,
) -> Result<BoundaryResult> {
    let scan = |r: f64| phi_excess(geometry, &SphericalPoint { r, direction: *direction }, ctx);
    Ok(degenerate(geometry, find_first_below(&scan, threshold, grid)?))
}

pub fn d_up(
    geometry: &ArrayGeometry,
    direction: &Direction,
    threshold: f64,
    grid: &SearchGrid,
) -> Result<BoundaryResult> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidInput(format!("Γ_th = {threshold} must lie in (0, 1)")));
    }
    let scan = |r: f64| gamma_uniform_power(geometry, &SphericalPoint { r, direction: *direction });
    Ok(degenerate(geometry, find_first_above(&scan, threshold, grid)?))
}

pub fn d_en(
    geometry: &ArrayGeometry,
    direction: &Direction,
    ctx: &WaveContext,
    threshold: f64,
    grid: &SearchGrid,
) -> Result<BoundaryResult> {
    let scan = |r: f64| psi_gain_ratio(geometry, &SphericalPoint { r, direction: *direction }, ctx);
    Ok(degenerate(geometry, find_last_above(&scan, threshold, grid)?))
}

pub fn d_ep(
    geometry: &ArrayGeometry,
    direction: &Direction,
    threshold: f64,
    grid: &SearchGrid,
) -> Result<BoundaryResult> {
    let scan = |r: f64| upsilon_power(geometry, &SphericalPoint { r, direction: *direction });
    Ok(degenerate(geometry, find_last_below(&scan, threshold, grid)?))
}

/// Ξ sampled on a search grid, reusable across thresholds.
///
/// Radii inside the smallest sphere enclosing the array are excluded by
/// treating Ξ as infinite there. The suffix maximum of Ξ is taken on the
/// grid; beyond the top of the bracket it is bounded by the last value once
/// Ξ has been verified to be non-increasing over the final decade.
#[derive(Debug, Clone)]
pub struct WorstCaseProfile<'a> {
    geometry: &'a ArrayGeometry,
    ctx: WaveContext,
    grid: SearchGrid,
    radii: Vec<f64>,
    xi: Vec<f64>,
    envelope: Vec<f64>,
}

impl<'a> WorstCaseProfile<'a> {
    pub fn new(geometry: &'a ArrayGeometry, ctx: &WaveContext, grid: &SearchGrid) -> Result<Self> {
        if collinear_coordinates(geometry).is_none() {
            return Err(Error::InvalidInput(
                "worst-case mismatch distance needs a collinear array".into(),
            ));
        }
        let radii = grid.0.points();
        let mut profile = Self {
            geometry,
            ctx: *ctx,
            grid: *grid,
            xi: Vec::new(),
            envelope: Vec::new(),
            radii,
        };
        profile.xi = profile
            .radii
            .par_iter()
            .map(|&r| profile.xi_at(r))
            .collect::<Result<_>>()?;

        let r_hi = grid.0.hi;
        let tail_start = profile.radii.partition_point(|&r| r < r_hi / 10.0);
        if profile.xi[tail_start..].windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::TailNotMonotone { r_max: r_hi });
        }
        let mut envelope = profile.xi.clone();
        for i in (0..envelope.len().saturating_sub(1)).rev() {
            envelope[i] = envelope[i].max(envelope[i + 1]);
        }
        profile.envelope = envelope;
        Ok(profile)
    }

    fn xi_at(&self, r: f64) -> Result<f64> {
        if r > self.geometry.max_radius() {
            xi_worst_mismatch(self.geometry, r, &self.ctx)
        } else {
            Ok(f64::INFINITY)
        }
    }

    /// `(r, Ξ(r))` on the grid, in 1/λ.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radii.iter().copied().zip(self.xi.iter().copied())
    }

    /// Boundary for `threshold` in m⁻¹, comparing against `Ξ / wavelength_m`.
    pub fn boundary(&self, threshold: f64, wavelength_m: f64) -> Result<BoundaryResult> {
        if !(threshold > 0.0) || !(wavelength_m > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Ξ_th = {threshold} and wavelength {wavelength_m} m must be positive"
            )));
        }
        let limit = threshold * wavelength_m;
        let inside: Vec<bool> = self.envelope.iter().map(|&v| v < limit).collect();
        let mut result = BoundaryResult {
            status: BoundaryStatus::NotFound,
            bracket: Some(self.grid.bracket()),
            crossings: inside.windows(2).filter(|w| w[0] != w[1]).count(),
            at_lower_edge: false,
            degenerate: self.geometry.len() < 2,
        };
        match inside.iter().position(|&m| m) {
            None => {}
            Some(0) => {
                result.status = BoundaryStatus::Found(self.radii[0]);
                result.at_lower_edge = true;
            }
            Some(i) => {
                // Inside this cell the envelope is max(Ξ(r), envelope[i]) and
                // envelope[i] < limit, so membership is decided by Ξ alone.
                let r = bisect(&|r| self.xi_at(r), &|v| v < limit, self.radii[i - 1], self.radii[i])?;
                result.status = BoundaryStatus::Found(r);
            }
        }
        Ok(result)
    }
}

/// Worst-case mismatch distance for a threshold in m⁻¹ at the physical
/// wavelength `wavelength_m`.
pub fn d_wc(
    geometry: &ArrayGeometry,
    ctx: &WaveContext,
    threshold: f64,
    wavelength_m: f64,
    grid: &SearchGrid,
) -> Result<BoundaryResult> {
    WorstCaseProfile::new(geometry, ctx, grid)?.boundary(threshold, wavelength_m)
}

/// Evaluates one boundary for a geometry and test-line direction.
pub fn evaluate(
    spec: &BoundarySpec,
    geometry: &ArrayGeometry,
    direction: &Direction,
    ctx: &WaveContext,
    options: &BoundaryOptions,
) -> Result<BoundaryResult> {
    let th = || {
        spec.threshold
            .ok_or_else(|| Error::InvalidInput(format!("{} needs a threshold", spec.kind)))
    };
    match spec.kind {
        BoundaryKind::QuasiRayleigh => Ok(d_qr(geometry, ctx)),
        BoundaryKind::ArrayRayleigh => d_ar(geometry, direction, ctx, th()?, &options.grid),
        BoundaryKind::UniformPower => d_up(geometry, direction, th()?, &options.grid),
        BoundaryKind::EffectiveNearField => d_en(geometry, direction, ctx, th()?, &options.grid),
        BoundaryKind::EquiPower => d_ep(geometry, direction, th()?, &options.grid),
        BoundaryKind::WorstCase => d_wc(geometry, ctx, th()?, options.wc_wavelength_m, &options.grid),
    }
}
