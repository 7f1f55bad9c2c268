//! Scalar indicators whose threshold crossings define the array boundaries.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sources::{ArrayGeometry, SINGULARITY_GUARD};
use crate::wave::{plane_wave_excess, SphericalPoint, Vec3, WaveContext};

/// Samples of the inner 1-D maximisation in [`xi_worst_mismatch`].
pub const XI_GRID_POINTS: usize = 2001;

fn require_positive_radius(point: &SphericalPoint) -> Result<()> {
    if point.r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput("boundary indicators need r > 0".into()))
    }
}

fn distances(geometry: &ArrayGeometry, point: Vec3) -> Result<Vec<f64>> {
    geometry
        .positions()
        .map(|p| {
            let d = (point - p).norm();
            if d < SINGULARITY_GUARD {
                Err(Error::Singularity {
                    distance: d,
                    guard: SINGULARITY_GUARD,
                })
            } else {
                Ok(d)
            }
        })
        .collect()
}

/// Largest phase error (radians) of the plane-wave approximation over the
/// elements: `max_n k(‖r − r_n‖ − ‖r‖ + r̂ᵀr_n)`.
pub fn phi_excess(geometry: &ArrayGeometry, point: &SphericalPoint, ctx: &WaveContext) -> Result<f64> {
    require_positive_radius(point)?;
    let r_hat = point.direction.unit_vector();
    Ok(geometry
        .positions()
        .map(|p| ctx.k() * plane_wave_excess(point.r, &r_hat, &p))
        .fold(0.0, f64::max))
}

/// Ratio of the weakest to the strongest projected element power,
/// `min_n g_n / max_n g_n` with `g_n = (r − r_n)ᵀn̂ / ‖r − r_n‖³`.
///
/// When the projection is the same for every element (any planar array
/// normal to n̂) it cancels and `g_n = 1/‖r − r_n‖³` is used; this also
/// covers test lines inside the array plane, where the projection is zero.
pub fn gamma_uniform_power(geometry: &ArrayGeometry, point: &SphericalPoint) -> Result<f64> {
    require_positive_radius(point)?;
    let pos = point.to_cartesian();
    let normal = geometry.normal();
    let dists = distances(geometry, pos)?;
    let proj: Vec<f64> = geometry.positions().map(|p| (pos - p).dot(&normal)).collect();

    let scale = point.r + geometry.max_radius();
    let common = proj.iter().all(|p| (p - proj[0]).abs() <= 1e-12 * scale);
    let g: Vec<f64> = if common {
        dists.iter().map(|d| 1.0 / (d * d * d)).collect()
    } else {
        let positive = proj.iter().all(|&p| p > 0.0);
        let negative = proj.iter().all(|&p| p < 0.0);
        if !positive && !negative {
            return Err(Error::UndefinedProjection { r: point.r });
        }
        proj.iter()
            .zip(&dists)
            .map(|(p, d)| (p / (d * d * d)).abs())
            .collect()
    };
    let min = g.iter().copied().fold(f64::INFINITY, f64::min);
    let max = g.iter().copied().fold(0.0, f64::max);
    Ok(min / max)
}

/// Beamfocusing over beamsteering gain at a point,
/// `|hᵀw_NF| / |hᵀw_FF|` with `h_n = e^{−jk‖r−r_n‖}/‖r−r_n‖`.
///
/// Both precoders target the point's own direction. `h_n·w_NF,n = 1/‖r−r_n‖`
/// exactly, and `h_n·w_FF,n = e^{−jkr}·e^{−jkΔ_n}/‖r−r_n‖` with `Δ_n` the
/// plane-wave excess path, so no large phases are formed.
pub fn psi_gain_ratio(geometry: &ArrayGeometry, point: &SphericalPoint, ctx: &WaveContext) -> Result<f64> {
    require_positive_radius(point)?;
    let r_hat = point.direction.unit_vector();
    let dists = distances(geometry, point.to_cartesian())?;
    let focused: f64 = dists.iter().map(|d| 1.0 / d).sum();
    let steered: Complex64 = geometry
        .positions()
        .zip(&dists)
        .map(|(p, d)| Complex64::from_polar(1.0 / d, -ctx.k() * plane_wave_excess(point.r, &r_hat, &p)))
        .sum();
    Ok(focused / steered.norm())
}

/// Normalised received power, `(r²/N)·Σ_n 1/‖r − r_n‖²`.
pub fn upsilon_power(geometry: &ArrayGeometry, point: &SphericalPoint) -> Result<f64> {
    require_positive_radius(point)?;
    let dists = distances(geometry, point.to_cartesian())?;
    let r2 = point.r * point.r;
    let n = geometry.len() as f64;
    Ok(dists.iter().map(|d| r2 / (d * d)).sum::<f64>() / n)
}

/// Signed element coordinates along the array axis, if every element lies
/// on one line through the origin.
pub fn collinear_coordinates(geometry: &ArrayGeometry) -> Option<Vec<f64>> {
    let extent = geometry.max_radius();
    if extent == 0.0 {
        return Some(vec![0.0; geometry.len()]);
    }
    let axis = geometry
        .positions()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .and_then(|p| p.normalized())?;
    let mut coords = Vec::with_capacity(geometry.len());
    for p in geometry.positions() {
        let t = p.dot(&axis);
        if (p - axis * t).norm() > 1e-12 * extent {
            return None;
        }
        coords.push(t);
    }
    Some(coords)
}

/// `|e^{−jk‖ra − r_n‖}/‖ra − r_n‖ − e^{−jk(r − aᵀr_n)}/r|` for an element at
/// signed axis coordinate `y`, with `s = aᵀ(axis)`.
///
/// The common phase `e^{−jk(r − s·y)}` is factored out, leaving
/// `e^{−jkΔ}/D` with `Δ = D − (r − s·y) = y²(1 − s²)/(D + r − s·y)`.
pub fn element_mismatch(y: f64, s: f64, r: f64, k: f64) -> f64 {
    let ahead = r - s * y;
    let perp2 = y * y * (1.0 - s * s).max(0.0);
    let dist = (ahead * ahead + perp2).sqrt();
    let excess = if ahead > 0.0 {
        perp2 / (dist + ahead)
    } else {
        dist - ahead
    };
    (Complex64::from_polar(1.0 / dist, -k * excess) - 1.0 / r).norm()
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Max over `s ∈ [−1, 1]` of [`element_mismatch`]: dense grid, then
/// golden-section refinement around the best sample.
pub fn element_worst_mismatch(y: f64, r: f64, k: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let n = XI_GRID_POINTS;
    let step = 2.0 / (n - 1) as f64;
    let s_at = |i: usize| (-1.0 + i as f64 * step).clamp(-1.0, 1.0);
    let (best_i, best) = (0..n)
        .map(|i| (i, element_mismatch(y, s_at(i), r, k)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let lo = s_at(best_i.saturating_sub(1));
    let hi = s_at((best_i + 1).min(n - 1));
    let (_, refined) = golden_max(|s| element_mismatch(y, s, r, k), lo, hi);
    best.max(refined)
}

/// Worst-case element mismatch between spherical and plane-wave element
/// responses at radius `r`, maximised over all unit directions:
///
/// `Ξ(r) = max_n max_{‖a‖=1} |e^{−jk‖ra−r_n‖}/‖ra−r_n‖ − e^{−jk(r−aᵀr_n)}/r|`.
///
/// For collinear arrays both terms depend on `a` only through its component
/// along the array axis, so the inner maximum is one-dimensional. Values are
/// in units of 1/λ. Requires `r > max_n ‖r_n‖`.
pub fn xi_worst_mismatch(geometry: &ArrayGeometry, r: f64, ctx: &WaveContext) -> Result<f64> {
    if !(r > geometry.max_radius()) {
        return Err(Error::InvalidInput(format!(
            "worst-case mismatch needs r > max element radius {} (got {r})",
            geometry.max_radius()
        )));
    }
    let coords = collinear_coordinates(geometry).ok_or_else(|| {
        Error::InvalidInput("worst-case mismatch is only defined here for collinear arrays".into())
    })?;
    // Elements at ±y share the same maximum (s ↦ −s).
    let mut mags: Vec<f64> = coords.iter().map(|y| y.abs()).collect();
    mags.sort_by(f64::total_cmp);
    mags.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.max(1.0));
    Ok(mags
        .iter()
        .map(|&y| element_worst_mismatch(y, r, ctx.k()))
        .fold(0.0, f64::max))
}

/// Threshold of the direction-dependent Rayleigh distance, π/8.
pub const PHASE_ERROR_LIMIT: f64 = PI / 8.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::{ff_precoder, nf_precoder};
    use crate::wave::Direction;

    fn ctx() -> WaveContext {
        WaveContext::default()
    }

    fn at(r: f64, d: Direction) -> SphericalPoint {
        SphericalPoint::new(r, d).unwrap()
    }

    #[test]
    fn phi_single_element_is_zero() {
        let g = ArrayGeometry::ula_y(1, 0.5).unwrap();
        for r in [1e-3, 0.7, 40.0, 1e6] {
            assert_eq!(phi_excess(&g, &at(r, Direction::DIAGONAL), &ctx()).unwrap(), 0.0);
        }
    }

    #[test]
    fn phi_side_line() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        for r in [1.76, 2.0, 10.0, 1e5] {
            assert_eq!(phi_excess(&g, &at(r, Direction::SIDE), &ctx()).unwrap(), 0.0);
        }
        for r in [0.1, 0.6, 1.3, 1.7] {
            let got = phi_excess(&g, &at(r, Direction::SIDE), &ctx()).unwrap();
            let want = 2.0 * ctx().k() * (1.75 - r);
            assert!((got - want).abs() < 1e-12, "{r}: {got} vs {want}");
        }
    }

    #[test]
    fn phi_vanishes_far_away() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        let v = phi_excess(&g, &at(1e6, Direction::FRONT), &ctx()).unwrap();
        assert!(v >= 0.0 && v < 1e-4);
    }

    #[test]
    fn gamma_side_closed_form() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        let a = 1.75;
        for r in [2.0, 5.0, 50.0, 300.0] {
            let got = gamma_uniform_power(&g, &at(r, Direction::SIDE)).unwrap();
            let want = ((r - a) / (r + a)).powi(3);
            assert!((got - want).abs() < 1e-12, "{got} {want}");
        }
    }

    #[test]
    fn gamma_front_matches_brute_force() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        for r in [0.3, 1.0, 6.48, 30.0] {
            let got = gamma_uniform_power(&g, &at(r, Direction::FRONT)).unwrap();
            let g_n: Vec<f64> = g
                .positions()
                .map(|p| {
                    let d2 = r * r + p.y() * p.y();
                    r / d2.powf(1.5)
                })
                .collect();
            let want = g_n.iter().cloned().fold(f64::MAX, f64::min) / g_n.iter().cloned().fold(0.0, f64::max);
            assert!((got - want).abs() < 1e-13, "{got} {want}");
            // closed form for the front line: ((r² + y_min²)/(r² + y_max²))^{3/2}
            let cf = ((r * r + 0.25 * 0.25) / (r * r + 1.75 * 1.75)).powf(1.5);
            assert!((got - cf).abs() < 1e-13, "{got} {cf}");
        }
        let far = gamma_uniform_power(&g, &at(1e6, Direction::FRONT)).unwrap();
        assert!((far - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gamma_mixed_signs_rejected() {
        // elements spread along the normal: projections change sign near the array
        let els = vec![
            crate::sources::DipoleElement::z_directed(Vec3::new(-1.0, 0.0, 0.0)),
            crate::sources::DipoleElement::z_directed(Vec3::new(1.0, 0.0, 0.0)),
        ];
        let g = ArrayGeometry::from_elements(els, 2.0, Vec3::X).unwrap();
        let err = gamma_uniform_power(&g, &at(0.5, Direction::FRONT)).unwrap_err();
        assert!(matches!(err, Error::UndefinedProjection { .. }));
    }

    #[test]
    fn psi_matches_literal_precoders() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        for (r, d) in [(0.4, Direction::FRONT), (3.0, Direction::DIAGONAL), (25.0, Direction::SIDE)] {
            let p = at(r, d);
            let pos = p.to_cartesian();
            let h: Vec<Complex64> = g
                .positions()
                .map(|q| {
                    let dist = (pos - q).norm();
                    Complex64::from_polar(1.0 / dist, -ctx().k() * dist)
                })
                .collect();
            let wn = nf_precoder(&g, pos, &ctx()).unwrap();
            let wf = ff_precoder(&g, &d, &ctx());
            let num: Complex64 = h.iter().zip(wn.weights()).map(|(a, b)| a * b).sum();
            let den: Complex64 = h.iter().zip(wf.weights()).map(|(a, b)| a * b).sum();
            let want = num.norm() / den.norm();
            let got = psi_gain_ratio(&g, &p, &ctx()).unwrap();
            assert!((got - want).abs() < 1e-10 * want, "{got} {want}");
        }
    }

    #[test]
    fn psi_single_element_and_far_limit() {
        let g1 = ArrayGeometry::ula_y(1, 0.5).unwrap();
        for r in [0.01, 1.0, 1e3] {
            let v = psi_gain_ratio(&g1, &at(r, Direction::FRONT), &ctx()).unwrap();
            assert!((v - 1.0).abs() < 1e-15);
        }
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        let v = psi_gain_ratio(&g, &at(1e5, Direction::DIAGONAL), &ctx()).unwrap();
        assert!((v - 1.0).abs() < 1e-3);
    }

    #[test]
    fn upsilon_cases() {
        let g1 = ArrayGeometry::ula_y(1, 0.5).unwrap();
        assert!((upsilon_power(&g1, &at(0.3, Direction::SIDE)).unwrap() - 1.0).abs() < 1e-15);

        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        for r in [0.1, 1.0, 11.27, 1e4] {
            let got = upsilon_power(&g, &at(r, Direction::FRONT)).unwrap();
            let want: f64 = g.positions().map(|p| r * r / (r * r + p.y() * p.y())).sum::<f64>() / 8.0;
            assert!((got - want).abs() < 1e-14);
            assert!(got < 1.0);
        }
        for r in [2.0, 10.0, 100.0] {
            let got = upsilon_power(&g, &at(r, Direction::SIDE)).unwrap();
            let want: f64 = g.positions().map(|p| (r / (r - p.y())).powi(2)).sum::<f64>() / 8.0;
            assert!((got - want).abs() < 1e-13, "{got} {want}");
            assert!(got > 1.0);
        }
    }

    #[test]
    fn origin_element_contributes_nothing() {
        assert_eq!(element_worst_mismatch(0.0, 5.0, ctx().k()), 0.0);
        let g = ArrayGeometry::ula_y(1, 0.5).unwrap();
        assert_eq!(xi_worst_mismatch(&g, 3.0, &ctx()).unwrap(), 0.0);
    }

    #[test]
    fn xi_preconditions() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        assert!(xi_worst_mismatch(&g, 1.75, &ctx()).is_err());
        assert!(xi_worst_mismatch(&g, 1.8, &ctx()).is_ok());
        let els = vec![
            crate::sources::DipoleElement::z_directed(Vec3::new(1.0, 0.0, 0.0)),
            crate::sources::DipoleElement::z_directed(Vec3::new(-0.5, 0.5, 0.0)),
            crate::sources::DipoleElement::z_directed(Vec3::new(-0.5, -0.5, 0.0)),
        ];
        let tri = ArrayGeometry::from_elements(els, 1.0, Vec3::Z).unwrap();
        assert!(xi_worst_mismatch(&tri, 10.0, &ctx()).is_err());
    }

    #[test]
    fn xi_decays_like_inverse_square() {
        let g = ArrayGeometry::ula_y(8, 0.5).unwrap();
        let a = xi_worst_mismatch(&g, 1e4, &ctx()).unwrap();
        let b = xi_worst_mismatch(&g, 1e5, &ctx()).unwrap();
        let slope = (b / a).log10();
        assert!((slope + 2.0).abs() < 0.01, "{slope}");
    }
}
