//! Angular field distribution `f(θ,φ)` and the auxiliary far-field functions
//!
//! ```text
//! E_FF = Z0^{1/2} · f · e^{−jkr}/r
//! H_FF = Z0^{−1/2} · (r̂ × f) · e^{−jkr}/r
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sources::{ArrayGeometry, ExcitationVector, FieldSample, FieldSource};
use crate::wave::{CVec3, Direction, SphericalPoint, Vec3, WaveContext};

/// Default sampling radius (in λ) for numerically extracted `f`.
pub const DEFAULT_SAMPLE_RADIUS: f64 = 1e6;

const J: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularFieldDistribution {
    pub direction: Direction,
    pub f: CVec3,
}

impl AngularFieldDistribution {
    /// `|r̂ᵀf| / ‖f‖`, zero for a vanishing pattern.
    pub fn radial_fraction(&self) -> f64 {
        let n = self.f.norm();
        if n == 0.0 {
            return 0.0;
        }
        self.f.dot_real(&self.direction.unit_vector()).norm() / n
    }
}

/// Closed-form `f` of a coupling-free dipole array.
pub fn analytic_angular_distribution(
    geometry: &ArrayGeometry,
    w: &ExcitationVector,
    direction: &Direction,
    ctx: &WaveContext,
) -> Result<AngularFieldDistribution> {
    if w.len() != geometry.len() {
        return Err(Error::InvalidInput(format!(
            "{} weights for {} elements",
            w.len(),
            geometry.len()
        )));
    }
    let r_hat = direction.unit_vector();
    let base = ctx.z0().sqrt() * J * ctx.k() * ctx.moment / (4.0 * PI);
    let mut f = CVec3::ZERO;
    for (element, weight) in geometry.elements().iter().zip(w.weights()) {
        let u = element.orientation();
        let cos_loc = u.dot(&r_hat);
        let array_phase = Complex64::from_polar(1.0, ctx.k() * r_hat.dot(&element.position));
        let coef = base * element.moment * weight * array_phase;
        f += CVec3::from_real(r_hat * cos_loc - u, coef);
    }
    Ok(AngularFieldDistribution {
        direction: *direction,
        f,
    })
}

/// `f` estimated from a single field sample, with the E/H cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledDistribution {
    pub distribution: AngularFieldDistribution,
    pub from_h: CVec3,
    /// `‖f_E − f_H‖ / max(‖f_E‖, ‖f_H‖)`.
    pub discrepancy: f64,
}

/// Inverts the auxiliary-field definitions for a sample `(E, H)` taken at
/// `r_ff·r̂`. The E-based estimate is returned as the distribution; the
/// H-based estimate must agree within `10/(k·r_ff)`.
pub fn angular_distribution_from_sample(
    sample: &FieldSample,
    direction: &Direction,
    r_ff: f64,
    ctx: &WaveContext,
) -> Result<SampledDistribution> {
    if !(r_ff > 0.0) || !r_ff.is_finite() {
        return Err(Error::InvalidInput(format!("sampling radius {r_ff} must be positive")));
    }
    let r_hat = direction.unit_vector();
    let undo = Complex64::from_polar(r_ff, ctx.k() * r_ff);
    let from_e = sample.e * (undo / ctx.z0().sqrt());
    // r̂ × f = Z0^{1/2}·r·e^{jkr}·H, and (r̂ × f) × r̂ = f for transversal f.
    let rhat_cross_f = sample.h * (undo * ctx.z0().sqrt());
    let from_h = rhat_cross_f.cross_right(&r_hat);

    let scale = from_e.norm().max(from_h.norm());
    let discrepancy = if scale == 0.0 {
        0.0
    } else {
        (from_e - from_h).norm() / scale
    };
    let tolerance = 10.0 / (ctx.k() * r_ff);
    if !(discrepancy <= tolerance) {
        return Err(Error::InconsistentFarField {
            discrepancy,
            tolerance,
        });
    }
    Ok(SampledDistribution {
        distribution: AngularFieldDistribution {
            direction: *direction,
            f: from_e,
        },
        from_h,
        discrepancy,
    })
}

/// Samples `source` at `r_ff` in `direction` and inverts the far-field
/// approximation there.
pub fn sample_angular_distribution(
    source: &dyn FieldSource,
    direction: &Direction,
    r_ff: f64,
    ctx: &WaveContext,
) -> Result<SampledDistribution> {
    let point = direction.unit_vector() * r_ff;
    let sample = source.field_at(point, ctx)?;
    angular_distribution_from_sample(&sample, direction, r_ff, ctx)
}

pub fn auxiliary_fields(
    f: &AngularFieldDistribution,
    point: &SphericalPoint,
    ctx: &WaveContext,
) -> Result<FieldSample> {
    if !(point.r > 0.0) {
        return Err(Error::InvalidInput(
            "auxiliary far fields are undefined at r = 0".into(),
        ));
    }
    let r_hat = point.direction.unit_vector();
    let spread = Complex64::from_polar(1.0 / point.r, -ctx.k() * point.r);
    let z = ctx.z0().sqrt();
    Ok(FieldSample {
        e: f.f * (spread * z),
        h: f.f.cross_left(&r_hat) * (spread / z),
    })
}

/// A source whose fields are exactly the auxiliary far fields of a fixed `f`.
#[derive(Debug, Clone, Copy)]
pub struct FarFieldSource {
    pub f: CVec3,
}

impl FieldSource for FarFieldSource {
    fn field_at(&self, point: Vec3, ctx: &WaveContext) -> Result<FieldSample> {
        let sp = SphericalPoint::from_cartesian(point);
        let dist = AngularFieldDistribution {
            direction: sp.direction,
            f: self.f,
        };
        auxiliary_fields(&dist, &sp, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::{ff_precoder, DrivenArray};
    use crate::wave::Z0;

    fn ctx() -> WaveContext {
        WaveContext::default()
    }

    #[test]
    fn single_dipole_pattern() {
        let g = ArrayGeometry::ula_y(1, 0.5).unwrap();
        let w = ExcitationVector::uniform(1);
        let up = Direction::from_degrees(0.0, 0.0).unwrap();
        let f = analytic_angular_distribution(&g, &w, &up, &ctx()).unwrap();
        assert_eq!(f.f.norm(), 0.0);

        let f = analytic_angular_distribution(&g, &w, &Direction::FRONT, &ctx()).unwrap();
        let want = Z0.sqrt() * ctx().k() / (4.0 * PI);
        assert!((f.f.norm() / want - 1.0).abs() < 1e-14);
    }

    #[test]
    fn broadside_coherent_sum() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        let w = ExcitationVector::uniform(8);
        let f = analytic_angular_distribution(&g, &w, &Direction::FRONT, &ctx()).unwrap();
        let single = Z0.sqrt() * ctx().k() / (4.0 * PI);
        assert!((f.f.norm() / (8.0 * single) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sampled_matches_analytic_for_single_dipole() {
        let g = ArrayGeometry::ula_y(1, 0.5).unwrap();
        let w = ExcitationVector::uniform(1);
        let dir = Direction::from_degrees(60.0, 20.0).unwrap();
        let src = DrivenArray { geometry: &g, weights: w.clone() };
        let s = sample_angular_distribution(&src, &dir, DEFAULT_SAMPLE_RADIUS, &ctx()).unwrap();
        let a = analytic_angular_distribution(&g, &w, &dir, &ctx()).unwrap();
        let rel = (s.distribution.f - a.f).norm() / a.f.norm();
        assert!(rel < 1e-5, "{rel}");
    }

    #[test]
    fn exact_recovery_from_far_field_provider() {
        let f = CVec3([
            Complex64::new(0.0, 0.0),
            Complex64::new(1.5, -0.25),
            Complex64::new(-0.75, 2.0),
        ]);
        let src = FarFieldSource { f };
        let got = sample_angular_distribution(&src, &Direction::FRONT, 1e3, &ctx()).unwrap();
        assert!((got.distribution.f - f).norm() < 1e-12 * f.norm());
        assert!(got.discrepancy < 1e-12);
    }

    #[test]
    fn sampled_array_pattern_is_transversal() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        let dir = Direction::from_degrees(90.0, 45.0).unwrap();
        let w = ff_precoder(&g, &dir, &ctx());
        let src = DrivenArray { geometry: &g, weights: w };
        let s = sample_angular_distribution(&src, &dir, DEFAULT_SAMPLE_RADIUS, &ctx()).unwrap();
        assert!(s.distribution.radial_fraction() < 1e-5);
    }

    #[test]
    fn scaled_h_is_inconsistent() {
        let g = ArrayGeometry::ula_y(1, 0.5).unwrap();
        let src = DrivenArray { geometry: &g, weights: ExcitationVector::uniform(1) };
        let point = Direction::FRONT.unit_vector() * DEFAULT_SAMPLE_RADIUS;
        let mut sample = src.field_at(point, &ctx()).unwrap();
        sample.h = sample.h * 2.0;
        let err = angular_distribution_from_sample(&sample, &Direction::FRONT, DEFAULT_SAMPLE_RADIUS, &ctx());
        assert!(matches!(err, Err(Error::InconsistentFarField { .. })));
    }

    #[test]
    fn auxiliary_field_relations() {
        let dir = Direction::from_degrees(50.0, 110.0).unwrap();
        let r_hat = dir.unit_vector();
        // a transversal pattern
        let t1 = Direction::from_degrees(140.0, 110.0).unwrap().unit_vector();
        let t1 = (t1 - r_hat * t1.dot(&r_hat)).normalized().unwrap();
        let t2 = r_hat.cross(&t1);
        let f = CVec3::from_real(t1, Complex64::new(0.4, 1.1)) + CVec3::from_real(t2, Complex64::new(-2.0, 0.3));
        let dist = AngularFieldDistribution { direction: dir, f };

        let p1 = SphericalPoint::new(3.3, dir).unwrap();
        let p2 = SphericalPoint::new(6.6, dir).unwrap();
        let a = auxiliary_fields(&dist, &p1, &ctx()).unwrap();
        let b = auxiliary_fields(&dist, &p2, &ctx()).unwrap();

        assert!((a.e.norm() / a.h.norm() - Z0).abs() < 1e-12 * Z0);
        assert!(a.e.dot_real(&r_hat).norm() < 1e-14 * a.e.norm());
        assert!(a.h.dot_real(&r_hat).norm() < 1e-14 * a.h.norm());
        // H ⟂ E in the bilinear sense: (r̂×f)·f = 0
        let eh: Complex64 = (0..3).map(|i| a.e.0[i] * a.h.0[i]).sum();
        assert!(eh.norm() < 1e-12 * a.e.norm() * a.h.norm());

        // doubling r halves the magnitude and advances the phase by e^{−jk·3.3}
        let ratio = b.e.0[0] / a.e.0[0];
        let want = Complex64::from_polar(0.5, -ctx().k() * 3.3);
        assert!((ratio - want).norm() < 1e-12);

        assert!(auxiliary_fields(&dist, &SphericalPoint::new(0.0, dir).unwrap(), &ctx()).is_err());
    }
}
