//! Infinitesimal-dipole fields, coupling-free array superposition and the
//! beamsteering / beamfocusing precoders.
//!
//! With `R = r − r₀`, `R̂ = R/R`, `c = ûᵀR̂` and `q = 1/(jkR)` the element fields are
//!
//! ```text
//! H = e^{−jkR} · jk·Il/(4πR) · (1 + q) · (û × R̂)
//! E = e^{−jkR} · { Z0·Il/(2πR²)·(1 + q)·c·R̂ + jZ0k·Il/(4πR)·(1 + q − 1/(kR)²)·(c·R̂ − û) }
//! ```
//!
//! which are the textbook ẑ-dipole expressions written without reference to
//! the element's own polar angle, so no division by sin θ occurs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wave::{stable_excess_path, CVec3, Direction, Vec3, WaveContext};

/// Points closer than this (in λ) to an element are rejected.
pub const SINGULARITY_GUARD: f64 = 1e-9;

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Complex electric and magnetic field at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSample {
    pub e: CVec3,
    pub h: CVec3,
}

impl FieldSample {
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            e: self.e * c,
            h: self.h * c,
        }
    }
}

impl std::ops::AddAssign for FieldSample {
    fn add_assign(&mut self, o: Self) {
        self.e += o.e;
        self.h += o.h;
    }
}

/// Anything that can report the true fields at a cartesian point.
pub trait FieldSource: Sync {
    fn field_at(&self, point: Vec3, ctx: &WaveContext) -> Result<FieldSample>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleElement {
    pub position: Vec3,
    orientation: Vec3,
    /// Complex multiplier on the element moment.
    pub moment: Complex64,
}

impl DipoleElement {
    pub fn new(position: Vec3, orientation: Vec3) -> Result<Self> {
        let orientation = orientation
            .normalized()
            .ok_or_else(|| Error::InvalidInput("dipole orientation must be non-zero".into()))?;
        Ok(Self {
            position,
            orientation,
            moment: Complex64::new(1.0, 0.0),
        })
    }

    /// ẑ-oriented element with unit moment.
    pub fn z_directed(position: Vec3) -> Self {
        Self {
            position,
            orientation: Vec3::Z,
            moment: Complex64::new(1.0, 0.0),
        }
    }

    pub fn orientation(&self) -> Vec3 {
        self.orientation
    }
}

pub fn dipole_field(element: &DipoleElement, point: Vec3, ctx: &WaveContext) -> Result<FieldSample> {
    let rel = point - element.position;
    let dist = rel.norm();
    if dist < SINGULARITY_GUARD {
        return Err(Error::Singularity {
            distance: dist,
            guard: SINGULARITY_GUARD,
        });
    }
    let k = ctx.k();
    let z0 = ctx.z0();
    let il = element.moment * ctx.moment;
    let u = element.orientation;
    let r_hat = rel * (1.0 / dist);
    let cos_loc = u.dot(&r_hat);
    let kr = k * dist;
    let q = 1.0 / (J * kr);
    let phase = Complex64::from_polar(1.0, -kr);

    let h_coef = phase * J * k * il / (4.0 * PI * dist) * (1.0 + q);
    let h = CVec3::from_real(u.cross(&r_hat), h_coef);

    let radial_coef = phase * z0 * il / (2.0 * PI * dist * dist) * (1.0 + q) * cos_loc;
    let polar_coef = phase * J * z0 * k * il / (4.0 * PI * dist) * (1.0 + q - 1.0 / (kr * kr));
    let e = CVec3::from_real(r_hat, radial_coef) + CVec3::from_real(r_hat * cos_loc - u, polar_coef);

    Ok(FieldSample { e, h })
}

/// Element positions plus the array normal used by the uniform-power
/// distance.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    elements: Vec<DipoleElement>,
    spacing: f64,
    normal: Vec3,
}

impl ArrayGeometry {
    /// ẑ-dipole ULA along the y-axis, centred on the origin, boresight x̂.
    /// Element n (1-based) sits at `y = (n − (N+1)/2)·d`.
    pub fn ula_y(n: usize, spacing: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("array needs at least one element".into()));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidInput(format!("spacing {spacing} must be positive")));
        }
        let centre = (n as f64 + 1.0) / 2.0;
        let elements = (1..=n)
            .map(|i| DipoleElement::z_directed(Vec3::new(0.0, (i as f64 - centre) * spacing, 0.0)))
            .collect();
        Ok(Self {
            elements,
            spacing,
            normal: Vec3::X,
        })
    }

    /// Arbitrary element set. Positions must be centred on the origin.
    pub fn from_elements(elements: Vec<DipoleElement>, spacing: f64, normal: Vec3) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidInput("array needs at least one element".into()));
        }
        let n = elements.len() as f64;
        let mean = elements.iter().fold(Vec3::ZERO, |acc, e| acc + e.position) * (1.0 / n);
        let extent = elements
            .iter()
            .map(|e| e.position.norm())
            .fold(1.0_f64, f64::max);
        if mean.norm() > 1e-12 * extent {
            return Err(Error::InvalidInput(format!(
                "array is not centred on the origin (mean position {:?})",
                mean.0
            )));
        }
        let normal = normal
            .normalized()
            .ok_or_else(|| Error::InvalidInput("array normal must be non-zero".into()))?;
        Ok(Self {
            elements,
            spacing,
            normal,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[DipoleElement] {
        &self.elements
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.elements.iter().map(|e| e.position)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    /// Largest dimension of the array: the maximum distance between two
    /// element centres, `(N−1)·d` for a ULA.
    pub fn largest_dimension(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                best = best.max((a.position - b.position).norm());
            }
        }
        best
    }

    /// Largest element distance from the origin.
    pub fn max_radius(&self) -> f64 {
        self.positions().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Fails if `point` lies inside the singularity guard of any element.
    pub fn check_clear(&self, point: Vec3) -> Result<()> {
        for p in self.positions() {
            let d = (point - p).norm();
            if d < SINGULARITY_GUARD {
                return Err(Error::Singularity {
                    distance: d,
                    guard: SINGULARITY_GUARD,
                });
            }
        }
        Ok(())
    }
}

/// One complex weight per array element.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationVector(pub Vec<Complex64>);

impl ExcitationVector {
    pub fn uniform(n: usize) -> Self {
        Self(vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.0
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|w| w * c).collect())
    }
}

pub fn array_field(
    geometry: &ArrayGeometry,
    w: &ExcitationVector,
    point: Vec3,
    ctx: &WaveContext,
) -> Result<FieldSample> {
    if w.len() != geometry.len() {
        return Err(Error::InvalidInput(format!(
            "{} weights for {} elements",
            w.len(),
            geometry.len()
        )));
    }
    let mut total = FieldSample::default();
    for (element, weight) in geometry.elements().iter().zip(w.weights()) {
        total += dipole_field(element, point, ctx)?.scaled(*weight);
    }
    Ok(total)
}

/// Beamsteering weights `w_n = e^{−jk·r_nᵀr̂}`.
pub fn ff_precoder(geometry: &ArrayGeometry, direction: &Direction, ctx: &WaveContext) -> ExcitationVector {
    let r_hat = direction.unit_vector();
    ExcitationVector(
        geometry
            .positions()
            .map(|p| Complex64::from_polar(1.0, -ctx.k() * p.dot(&r_hat)))
            .collect(),
    )
}

/// Beamfocusing weights `w_n = e^{+jk‖r − r_n‖}`.
///
/// A common phase `e^{+jk‖r‖}` is removed so that the weights stay
/// well-conditioned at large focus distances; the excitation is otherwise
/// identical.
pub fn nf_precoder(geometry: &ArrayGeometry, focus: Vec3, ctx: &WaveContext) -> Result<ExcitationVector> {
    geometry.check_clear(focus)?;
    let r = focus.norm();
    let weights = match focus.normalized() {
        Some(r_hat) => geometry
            .positions()
            .map(|p| Complex64::from_polar(1.0, ctx.k() * stable_excess_path(r, &r_hat, &p)))
            .collect(),
        None => geometry
            .positions()
            .map(|p| Complex64::from_polar(1.0, ctx.k() * p.norm()))
            .collect(),
    };
    Ok(ExcitationVector(weights))
}

/// A dipole array driven by fixed weights.
#[derive(Debug, Clone)]
pub struct DrivenArray<'a> {
    pub geometry: &'a ArrayGeometry,
    pub weights: ExcitationVector,
}

impl FieldSource for DrivenArray<'_> {
    fn field_at(&self, point: Vec3, ctx: &WaveContext) -> Result<FieldSample> {
        array_field(self.geometry, &self.weights, point, ctx)
    }
}
