//! Constants, coordinates and small vector types shared by all field math.
//!
//! Lengths are expressed in wavelengths throughout the crate (λ = 1), so a
//! radius printed as `24.5` means 24.5λ. Angles enter public constructors in
//! degrees and are stored in radians.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Impedance of free space in ohms.
pub const Z0: f64 = 376.730313668;

/// Free-space constants for a single frequency, in wavelength units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveContext {
    wavelength: f64,
    wavenumber: f64,
    impedance: f64,
    /// Current moment `I·l` of every dipole element.
    pub moment: f64,
}

impl Default for WaveContext {
    fn default() -> Self {
        Self::with_moment(1.0)
    }
}

impl WaveContext {
    pub fn with_moment(moment: f64) -> Self {
        Self {
            wavelength: 1.0,
            wavenumber: TAU,
            impedance: Z0,
            moment,
        }
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn k(&self) -> f64 {
        self.wavenumber
    }

    pub fn z0(&self) -> f64 {
        self.impedance
    }
}

/// Real cartesian 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);
    pub const X: Vec3 = Vec3([1.0, 0.0, 0.0]);
    pub const Y: Vec3 = Vec3([0.0, 1.0, 0.0]);
    pub const Z: Vec3 = Vec3([0.0, 0.0, 1.0]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = other.0;
        Vec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    /// Euclidean norm, scaled to avoid overflow/underflow.
    pub fn norm(&self) -> f64 {
        self.0[0].hypot(self.0[1]).hypot(self.0[2])
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| *self * (1.0 / n))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self * -1.0
    }
}

/// Complex phasor 3-vector (field components).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec3(pub [Complex64; 3]);

impl CVec3 {
    pub const ZERO: CVec3 = CVec3([Complex64::new(0.0, 0.0); 3]);

    /// Real vector times a complex scalar.
    pub fn from_real(v: Vec3, c: Complex64) -> Self {
        CVec3([c * v.0[0], c * v.0[1], c * v.0[2]])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .fold(0.0_f64, |acc, c| acc.hypot(c.re).hypot(c.im))
    }

    /// Bilinear product with a real vector (no conjugation).
    pub fn dot_real(&self, v: &Vec3) -> Complex64 {
        self.0[0] * v.0[0] + self.0[1] * v.0[1] + self.0[2] * v.0[2]
    }

    /// `v × self` for a real left operand.
    pub fn cross_left(&self, v: &Vec3) -> CVec3 {
        let [a0, a1, a2] = v.0;
        let [b0, b1, b2] = self.0;
        CVec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    /// `self × v` for a real right operand.
    pub fn cross_right(&self, v: &Vec3) -> CVec3 {
        -self.cross_left(v)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, o: CVec3) -> CVec3 {
        CVec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for CVec3 {
    fn add_assign(&mut self, o: CVec3) {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, o: CVec3) -> CVec3 {
        CVec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for CVec3 {
    type Output = CVec3;
    fn neg(self) -> CVec3 {
        CVec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<Complex64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: Complex64) -> CVec3 {
        CVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: f64) -> CVec3 {
        CVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

/// Observation direction in the physicist's convention: polar angle θ from
/// +z, azimuth φ from +x towards +y. Stored in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// The array's front direction, (90°, 0°).
    pub const FRONT: Direction = Direction {
        theta: PI / 2.0,
        phi: 0.0,
    };
    /// The diagonal direction, (90°, 45°).
    pub const DIAGONAL: Direction = Direction {
        theta: PI / 2.0,
        phi: PI / 4.0,
    };
    /// The side (end-fire) direction, (90°, 90°).
    pub const SIDE: Direction = Direction {
        theta: PI / 2.0,
        phi: PI / 2.0,
    };

    /// θ must lie in [0°, 180°]; φ is wrapped into [0°, 360°).
    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Result<Self> {
        if !theta_deg.is_finite() || !phi_deg.is_finite() {
            return Err(Error::InvalidInput("direction angles must be finite".into()));
        }
        if !(0.0..=180.0).contains(&theta_deg) {
            return Err(Error::InvalidInput(format!(
                "polar angle {theta_deg}° outside [0°, 180°]"
            )));
        }
        let phi_deg = phi_deg.rem_euclid(360.0);
        Ok(Self {
            theta: theta_deg.to_radians(),
            phi: phi_deg.to_radians(),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta.to_degrees()
    }

    pub fn phi_deg(&self) -> f64 {
        self.phi.to_degrees()
    }

    /// Cartesian unit vector r̂.
    pub fn unit_vector(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        // Exact zeros on the axes keep r̂ᵀr_n free of 1e-17 residue.
        let snap = |v: f64| if v.abs() < 1e-16 { 0.0 } else { v };
        Vec3([snap(st * cp), snap(st * sp), snap(ct)])
    }
}

pub fn unit_vector(direction: &Direction) -> Vec3 {
    direction.unit_vector()
}

/// Point given by radius and direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub r: f64,
    pub direction: Direction,
}

impl SphericalPoint {
    pub fn new(r: f64, direction: Direction) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidInput(format!("radius {r} must be finite and >= 0")));
        }
        Ok(Self { r, direction })
    }

    pub fn to_cartesian(&self) -> Vec3 {
        self.direction.unit_vector() * self.r
    }

    /// Inverse conversion. The origin maps to r = 0 with θ = φ = 0.
    pub fn from_cartesian(p: Vec3) -> Self {
        let r = p.norm();
        if r == 0.0 {
            return Self {
                r: 0.0,
                direction: Direction { theta: 0.0, phi: 0.0 },
            };
        }
        let rho = p.x().hypot(p.y());
        let theta = rho.atan2(p.z());
        let phi = p.y().atan2(p.x()).rem_euclid(TAU);
        // rem_euclid may round a tiny negative angle up to exactly TAU.
        let phi = if phi >= TAU { 0.0 } else { phi };
        Self {
            r,
            direction: Direction { theta, phi },
        }
    }
}

/// `‖r·r̂ − r_n‖ − r` without cancellation, via
/// `(‖r_n‖² − 2r·r̂ᵀr_n) / (‖r·r̂ − r_n‖ + r)`.
///
/// `r_hat` is taken to be of unit length.
pub fn stable_excess_path(r: f64, r_hat: &Vec3, r_n: &Vec3) -> f64 {
    let num = r_n.norm_sqr() - 2.0 * r * r_hat.dot(r_n);
    if num == 0.0 {
        return 0.0;
    }
    let dist = (*r_hat * r - *r_n).norm();
    num / (dist + r)
}

/// `‖r·r̂ − r_n‖ − r + r̂ᵀr_n`: extra path length of a spherical wave from
/// `r_n` over the plane-wave approximation. Always ≥ 0 and exactly 0 when
/// `r_n` lies on the test line behind the point.
pub fn plane_wave_excess(r: f64, r_hat: &Vec3, r_n: &Vec3) -> f64 {
    let along = r_hat.dot(r_n);
    let perp = (*r_n - *r_hat * along).norm_sqr();
    let ahead = r - along;
    let dist = (*r_hat * r - *r_n).norm();
    if ahead > 0.0 {
        // D² − (r − t)² = ‖r_n‖² − t²
        perp / (dist + ahead)
    } else {
        dist - ahead
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn axis_directions() {
        let d = Direction::from_degrees(90.0, 0.0).unwrap();
        assert_eq!(d.unit_vector(), Vec3::X);
        let d = Direction::from_degrees(90.0, 90.0).unwrap();
        assert_eq!(d.unit_vector(), Vec3::Y);
        for phi in [0.0, 33.0, 180.0, 359.0] {
            let d = Direction::from_degrees(0.0, phi).unwrap();
            assert_eq!(d.unit_vector(), Vec3::Z);
        }
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::from_degrees(-1.0, 0.0).is_err());
        assert!(Direction::from_degrees(180.5, 0.0).is_err());
        assert!(Direction::from_degrees(f64::NAN, 0.0).is_err());
        let d = Direction::from_degrees(90.0, -90.0).unwrap();
        assert!((d.phi_deg() - 270.0).abs() < 1e-12);
        let d = Direction::from_degrees(90.0, 360.0).unwrap();
        assert_eq!(d.phi(), 0.0);
    }

    #[test]
    fn spherical_examples() {
        let p = SphericalPoint::new(2.0, Direction::from_degrees(90.0, 0.0).unwrap()).unwrap();
        assert!(close(p.to_cartesian(), Vec3::new(2.0, 0.0, 0.0), 1e-15));

        let o = SphericalPoint::from_cartesian(Vec3::ZERO);
        assert_eq!(o.r, 0.0);
        assert_eq!(o.direction.theta(), 0.0);
        assert_eq!(o.direction.phi(), 0.0);

        let p = SphericalPoint::new(1.0, Direction::from_degrees(45.0, 45.0).unwrap()).unwrap();
        let want = Vec3::new(0.5, 0.5, 2f64.sqrt() / 2.0);
        assert!(close(p.to_cartesian(), want, 1e-15));
        assert!(SphericalPoint::new(-1.0, Direction::FRONT).is_err());
    }

    #[test]
    fn excess_path_cases() {
        let rn = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(stable_excess_path(5.0, &Vec3::X, &Vec3::ZERO), 0.0);
        let v = stable_excess_path(1e6, &Vec3::X, &rn);
        assert!((v - 5e-7).abs() < 1e-18, "{v}");
        // Collinear: point beyond the element along its own direction.
        let rn = Vec3::new(0.0, 3.0, 0.0);
        let v = stable_excess_path(10.0, &Vec3::Y, &rn);
        assert!((v + 3.0).abs() < 1e-15);
    }

    #[test]
    fn plane_wave_excess_cases() {
        let rn = Vec3::new(0.0, 1.75, 0.0);
        // behind the point on the test line
        assert_eq!(plane_wave_excess(10.0, &Vec3::Y, &rn), 0.0);
        assert_eq!(plane_wave_excess(10.0, &Vec3::Y, &-rn), 0.0);
        // beyond the point
        assert!((plane_wave_excess(1.0, &Vec3::Y, &rn) - 1.5).abs() < 1e-15);
        // broadside: sqrt(r² + y²) − r
        let r = 3.0;
        let want = (r * r + 1.75f64 * 1.75).sqrt() - r;
        assert!((plane_wave_excess(r, &Vec3::X, &rn) - want).abs() < 1e-15);
    }

    #[test]
    fn complex_vector_ops() {
        let v = CVec3([
            Complex64::new(1.0, 2.0),
            Complex64::new(-3.0, 0.5),
            Complex64::new(0.0, -1.0),
        ]);
        let c = Complex64::new(0.3, -1.7);
        assert!(((v * c).norm() - c.norm() * v.norm()).abs() < 1e-14);
        // x̂ × (ŷ component) = ẑ
        let w = CVec3::from_real(Vec3::Y, Complex64::new(1.0, 0.0));
        assert_eq!(w.cross_left(&Vec3::X), CVec3::from_real(Vec3::Z, 1.0.into()));
        assert_eq!(w.cross_right(&Vec3::X), CVec3::from_real(-Vec3::Z, 1.0.into()));
    }
}
