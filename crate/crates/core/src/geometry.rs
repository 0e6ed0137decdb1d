//! Spherical geometry on the DOA sphere.
//!
//! Azimuth is measured counterclockwise from +x (towards +y), elevation from
//! the horizontal plane towards +z, both in degrees. Poles get azimuth 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MIN_NORM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn add(self, other: Vec3) -> Vec3 {
        Vec3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn normalized(self) -> Result<Vec3> {
        let n = self.norm();
        if !(n > MIN_NORM) {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(1.0 / n))
    }
}

/// Wraps an angle in degrees into [-180, 180).
pub fn wrap_degrees(a: f64) -> f64 {
    let w = (a + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 180.0 {
        w - 360.0
    } else {
        w
    }
}

pub fn sph_to_unit(azimuth: f64, elevation: f64) -> Vec3 {
    let (az, el) = (azimuth.to_radians(), elevation.to_radians());
    Vec3::new(el.cos() * az.cos(), el.cos() * az.sin(), el.sin())
}

/// Returns `(azimuth, elevation)` in degrees with azimuth in [-180, 180).
pub fn unit_to_sph(v: Vec3) -> Result<(f64, f64)> {
    let u = v.normalized()?;
    let horizontal = u.x.hypot(u.y);
    let elevation = u.z.atan2(horizontal).to_degrees();
    let azimuth = if horizontal < 1e-12 {
        0.0
    } else {
        wrap_degrees(u.y.atan2(u.x).to_degrees())
    };
    Ok((azimuth, elevation))
}

/// Great-circle angle between two directions, in degrees.
pub fn angular_distance(u: Vec3, v: Vec3) -> Result<f64> {
    let (a, b) = (u.normalized()?, v.normalized()?);
    let cross = Vec3::new(a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x);
    Ok(cross.norm().atan2(a.dot(b)).to_degrees())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn axis_cases() {
        let v = sph_to_unit(0.0, 0.0);
        assert_abs_diff_eq!(v.x, 1.0, epsilon = 1e-12);
        let v = sph_to_unit(90.0, 0.0);
        assert_abs_diff_eq!(v.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.y, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_direction() {
        let v = sph_to_unit(45.0, 45.0);
        assert_abs_diff_eq!(v.x, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(v.y, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(v.z, 0.70711, epsilon = 1e-5);
        let (az, el) = unit_to_sph(Vec3::new(0.5, 0.5, 0.70711)).unwrap();
        assert_abs_diff_eq!(az, 45.0, epsilon = 1e-3);
        assert_abs_diff_eq!(el, 45.0, epsilon = 1e-3);
    }

    #[test]
    fn pole_gets_zero_azimuth() {
        assert_eq!(unit_to_sph(Vec3::new(0.0, 0.0, 1.0)).unwrap(), (0.0, 90.0));
        assert_eq!(unit_to_sph(Vec3::new(1.0, 0.0, 0.0)).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(matches!(unit_to_sph(Vec3::ZERO), Err(Error::ZeroVector)));
        assert!(matches!(
            angular_distance(Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0)),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn angular_distance_examples() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        assert_eq!(angular_distance(x, x).unwrap(), 0.0);
        assert_abs_diff_eq!(
            angular_distance(x, Vec3::new(0.0, 1.0, 0.0)).unwrap(),
            90.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            angular_distance(x, Vec3::new(0.5, 0.5, 0.70711)).unwrap(),
            60.0,
            epsilon = 1e-3
        );
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_degrees(180.0), -180.0);
        assert_eq!(wrap_degrees(540.0), -180.0);
        assert_abs_diff_eq!(wrap_degrees(-190.0), 170.0, epsilon = 1e-12);
        let v = sph_to_unit(370.0, 0.0);
        let (az, _) = unit_to_sph(v).unwrap();
        assert_abs_diff_eq!(az, 10.0, epsilon = 1e-9);
    }

    fn direction() -> impl Strategy<Value = (f64, f64)> {
        (-180.0..180.0f64, -89.9..89.9f64)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn round_trip((az, el) in direction()) {
            let v = sph_to_unit(az, el);
            prop_assert!((v.norm() - 1.0).abs() < 1e-6);
            let (az2, el2) = unit_to_sph(v).unwrap();
            prop_assert!((el - el2).abs() < 1e-4);
            prop_assert!(wrap_degrees(az - az2).abs() < 1e-4);
        }

        #[test]
        fn metric_properties(a in direction(), b in direction(), c in direction()) {
            let (u, v, w) = (sph_to_unit(a.0, a.1), sph_to_unit(b.0, b.1), sph_to_unit(c.0, c.1));
            let uv = angular_distance(u, v).unwrap();
            let vu = angular_distance(v, u).unwrap();
            prop_assert_eq!(uv, vu);
            prop_assert!((0.0..=180.0).contains(&uv));
            prop_assert!(angular_distance(u, u).unwrap() < 1e-5);
            let uw = angular_distance(u, w).unwrap();
            let vw = angular_distance(v, w).unwrap();
            prop_assert!(uw <= uv + vw + 1e-6);
        }
    }
}
