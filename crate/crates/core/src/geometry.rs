//! Euler-angle and direction-vector arithmetic.
//!
//! The antenna axis of the base station is a unit vector obtained from the
//! roll/pitch/yaw triple via [`orientation_vector`]; [`angles_from_direction`]
//! inverts that map for the yaw-free case used everywhere in this crate, and
//! [`aoa_cosine`] produces the elevation cosine of an incoming link.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two positions closer than this (meters) are treated as colocated and
/// rejected wherever a direction or a path-loss term would be formed.
pub const COLOCATION_EPSILON: f64 = 1e-6;

/// Tolerance on |norm − 1| for values that must be unit directions.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// 3-D Cartesian vector in the world frame. Meters when a position,
/// unitless when a direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance_to(&self, other: &Vec3) -> f64 {
        (*self - *other).norm()
    }

    /// Scale to unit length. Errors on vectors shorter than the colocation
    /// guard, where no direction is defined.
    pub fn normalized(&self) -> Result<Vec3> {
        let n = self.norm();
        if n < COLOCATION_EPSILON {
            return Err(Error::DegenerateGeometry(format!(
                "cannot normalize near-zero vector (norm {n:e})"
            )));
        }
        Ok(Vec3::new(self.x / n, self.y / n, self.z / n))
    }

    /// True when the norm is within [`UNIT_TOLERANCE`] of 1.
    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Roll/pitch/yaw in radians. Feasible poses keep |roll| and |pitch| within
/// π/2 and yaw at exactly 0; the types do not enforce that, the solvers do.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl EulerAngles {
    pub const ZERO: EulerAngles = EulerAngles { roll: 0.0, pitch: 0.0, yaw: 0.0 };

    pub fn new(roll: f64, pitch: f64, yaw: f64) -> Self {
        Self { roll, pitch, yaw }
    }

    /// Roll/pitch pair with yaw fixed to zero, the solver parameterization.
    pub fn yaw_free(roll: f64, pitch: f64) -> Self {
        Self { roll, pitch, yaw: 0.0 }
    }
}

/// Antenna axis for a roll/pitch/yaw triple. Always a unit vector; total on
/// every input.
pub fn orientation_vector(angles: &EulerAngles) -> Vec3 {
    let (sr, cr) = angles.roll.sin_cos();
    let (sp, cp) = angles.pitch.sin_cos();
    let (sy, cy) = angles.yaw.sin_cos();
    Vec3::new(cr * sp * cy + sr * sy, cr * sp * sy - sr * cy, cr * cp)
}

/// Invert [`orientation_vector`] for yaw = 0.
///
/// Returns roll in [−π/2, π/2] (principal arcsine) and pitch in (−π, π];
/// pitch can leave [−π/2, π/2] for directions with a negative z component,
/// so feasibility-sensitive callers must check. On the degenerate rays
/// [0, ±1, 0] the pitch is unconstrained and reported as 0.
pub fn angles_from_direction(dir: &Vec3) -> Result<EulerAngles> {
    if !dir.is_unit() {
        return Err(Error::InvalidDirection { norm: dir.norm() });
    }
    let roll = (-dir.y).clamp(-1.0, 1.0).asin();
    // x and z both vanish exactly when cos(roll) = 0; atan2 of signed zeros
    // could return ±π there, so pin the convention explicitly.
    let pitch = if dir.x == 0.0 && dir.z == 0.0 {
        0.0
    } else {
        dir.x.atan2(dir.z)
    };
    Ok(EulerAngles::yaw_free(roll, pitch))
}

/// Cosine of the elevation angle between the antenna axis and the incoming
/// signal from `target`, clamped to [−1, 1].
pub fn aoa_cosine(target: &Vec3, bs_position: &Vec3, antenna_dir: &Vec3) -> Result<f64> {
    if !antenna_dir.is_unit() {
        return Err(Error::InvalidDirection { norm: antenna_dir.norm() });
    }
    let offset = *target - *bs_position;
    let dist = offset.norm();
    if dist < COLOCATION_EPSILON {
        return Err(Error::DegenerateGeometry(format!(
            "target and base station colocated (separation {dist:e} m)"
        )));
    }
    let cos = offset.dot(antenna_dir) / dist;
    Ok(cos.clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_close(a: f64, b: f64, tol: f64, msg: &str) {
        assert!((a - b).abs() <= tol, "{msg}: {a} vs {b}");
    }

    fn assert_vec_close(a: &Vec3, b: &Vec3, tol: f64, msg: &str) {
        assert_close(a.x, b.x, tol, msg);
        assert_close(a.y, b.y, tol, msg);
        assert_close(a.z, b.z, tol, msg);
    }

    #[test]
    fn orientation_all_angles_zero_points_up() {
        let v = orientation_vector(&EulerAngles::ZERO);
        assert_vec_close(&v, &Vec3::new(0.0, 0.0, 1.0), 1e-15, "zero angles");
    }

    #[test]
    fn orientation_quarter_roll() {
        let v = orientation_vector(&EulerAngles::yaw_free(FRAC_PI_2, 0.0));
        assert_vec_close(&v, &Vec3::new(0.0, -1.0, 0.0), 1e-15, "roll pi/2");
    }

    #[test]
    fn orientation_quarter_pitch() {
        let v = orientation_vector(&EulerAngles::yaw_free(0.0, FRAC_PI_2));
        assert_vec_close(&v, &Vec3::new(1.0, 0.0, 0.0), 1e-15, "pitch pi/2");
    }

    #[test]
    fn inverse_identity_case() {
        let a = angles_from_direction(&Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(a, EulerAngles::ZERO);
    }

    #[test]
    fn inverse_x_axis() {
        let a = angles_from_direction(&Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_close(a.roll, 0.0, 1e-15, "roll");
        assert_close(a.pitch, FRAC_PI_2, 1e-15, "pitch");
        assert_eq!(a.yaw, 0.0);
    }

    #[test]
    fn inverse_degenerate_ray_pins_pitch_to_zero() {
        let a = angles_from_direction(&Vec3::new(0.0, -1.0, 0.0)).unwrap();
        assert_close(a.roll, FRAC_PI_2, 1e-15, "roll");
        assert_eq!(a.pitch, 0.0, "pitch pinned on the degenerate ray");
        // Sign-of-zero variant must not flip the convention to pi.
        let b = angles_from_direction(&Vec3::new(0.0, 1.0, -0.0)).unwrap();
        assert_eq!(b.pitch, 0.0);
    }

    #[test]
    fn inverse_rejects_non_unit_input() {
        let err = angles_from_direction(&Vec3::new(0.0, 0.0, 2.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidDirection { .. }), "got {err:?}");
    }

    #[test]
    fn aoa_node_straight_below_vertical_antenna() {
        let c = aoa_cosine(
            &Vec3::ZERO,
            &Vec3::new(0.0, 0.0, 10.0),
            &Vec3::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        assert_close(c, -1.0, 1e-15, "straight below");
    }

    #[test]
    fn aoa_orthogonal_geometry() {
        let c = aoa_cosine(
            &Vec3::new(10.0, 0.0, 10.0),
            &Vec3::new(0.0, 0.0, 10.0),
            &Vec3::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        assert_close(c, 0.0, 1e-15, "orthogonal");
    }

    #[test]
    fn aoa_hand_evaluated_oblique_case() {
        // Node at the origin, station at [17, 15, 4], axis vertical:
        // cosine is -4 / sqrt(17^2 + 15^2 + 4^2).
        let c = aoa_cosine(
            &Vec3::ZERO,
            &Vec3::new(17.0, 15.0, 4.0),
            &Vec3::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        let expected = -4.0 / 530.0_f64.sqrt();
        assert_close(c, expected, 1e-15, "oblique");
    }

    #[test]
    fn aoa_rejects_colocated_points() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        let err = aoa_cosine(&p, &p, &Vec3::new(0.0, 0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateGeometry(_)), "got {err:?}");
    }

    #[test]
    fn vertical_ray_is_yaw_invariant() {
        for k in -8..=8 {
            let yaw = k as f64 * PI / 8.0;
            let v = orientation_vector(&EulerAngles::new(0.0, 0.0, yaw));
            assert_vec_close(&v, &Vec3::new(0.0, 0.0, 1.0), 1e-15, "yaw sweep");
        }
    }

    #[test]
    fn cross_product_follows_right_hand_rule() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_vec_close(&x.cross(&y), &Vec3::new(0.0, 0.0, 1.0), 1e-15, "x cross y");
    }

    proptest! {
        #[test]
        fn orientation_vector_is_unit(
            roll in -PI..PI,
            pitch in -PI..PI,
            yaw in -PI..PI,
        ) {
            let v = orientation_vector(&EulerAngles::new(roll, pitch, yaw));
            prop_assert!((v.norm() - 1.0).abs() < 1e-9, "norm {}", v.norm());
        }

        #[test]
        fn direction_round_trip(
            az in 0.0..(2.0 * PI),
            cos_polar in -1.0f64..1.0,
        ) {
            // Uniform-ish unit direction from azimuth and polar cosine.
            let s = (1.0 - cos_polar * cos_polar).sqrt();
            let dir = Vec3::new(s * az.cos(), s * az.sin(), cos_polar);
            let angles = angles_from_direction(&dir).unwrap();
            prop_assert!(angles.roll.abs() <= FRAC_PI_2 + 1e-12);
            let back = orientation_vector(&angles);
            if dir.x == 0.0 && dir.z == 0.0 {
                // Degenerate ray: only the y component is recoverable.
                prop_assert!((back.y - dir.y).abs() < 1e-9);
            } else {
                prop_assert!((back.x - dir.x).abs() < 1e-9);
                prop_assert!((back.y - dir.y).abs() < 1e-9);
                prop_assert!((back.z - dir.z).abs() < 1e-9);
            }
        }

        #[test]
        fn aoa_cosine_translation_invariant(
            tx in -100.0f64..100.0,
            ty in -100.0f64..100.0,
            tz in -100.0f64..100.0,
        ) {
            let target = Vec3::new(3.0, -2.0, 1.0);
            let bs = Vec3::new(-5.0, 4.0, 12.0);
            let dir = Vec3::new(0.0, 0.0, 1.0);
            let shift = Vec3::new(tx, ty, tz);
            let a = aoa_cosine(&target, &bs, &dir).unwrap();
            let b = aoa_cosine(&(target + shift), &(bs + shift), &dir).unwrap();
            prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
