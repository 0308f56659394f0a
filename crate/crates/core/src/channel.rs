//! Antenna gain and SINR evaluation.
//!
//! A small-dipole pattern on the station's antenna axis gives each link a
//! gain of sin²(elevation AoA). Powers enter only as the ratios P_M/P and
//! σ²/P, so every SINR here is invariant to a common rescaling of the
//! transmit, jamming, and noise powers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    aoa_cosine, orientation_vector, EulerAngles, Vec3, COLOCATION_EPSILON,
};
use crate::scenario::Scenario;

/// Power ratios of the link budget. Legitimate transmit power is normalized
/// to 1, so only the jamming-to-transmission and noise-to-transmission
/// ratios are stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    /// Jamming-to-transmission power ratio P_M/P (≥ 0).
    pub pm_over_p: f64,
    /// Noise-to-transmission power ratio σ²/P (> 0).
    pub sigma2_over_p: f64,
}

impl PowerParams {
    pub fn new(pm_over_p: f64, sigma2_over_p: f64) -> Result<Self> {
        let p = Self { pm_over_p, sigma2_over_p };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pm_over_p >= 0.0) {
            return Err(Error::Validation(format!(
                "pm_over_p must be >= 0, got {}",
                self.pm_over_p
            )));
        }
        if !(self.sigma2_over_p > 0.0) {
            return Err(Error::Validation(format!(
                "sigma2_over_p must be > 0, got {}",
                self.sigma2_over_p
            )));
        }
        Ok(())
    }
}

/// Base-station pose: position plus antenna orientation angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec3,
    pub angles: EulerAngles,
}

impl Pose {
    pub fn new(position: Vec3, angles: EulerAngles) -> Self {
        Self { position, angles }
    }

    /// Antenna axis of this pose.
    pub fn antenna_axis(&self) -> Vec3 {
        orientation_vector(&self.angles)
    }
}

/// Normalized dipole power pattern, sin²(γ).
pub fn dipole_gain(gamma: f64) -> f64 {
    let s = gamma.sin();
    s * s
}

/// Pattern gain of the link from `pose` to `target`: 1 − cos²(AoA), which is
/// the dipole gain at the link's elevation angle.
pub fn link_gain(target: &Vec3, pose: &Pose) -> Result<f64> {
    let cos = aoa_cosine(target, &pose.position, &pose.antenna_axis())?;
    Ok(1.0 - cos * cos)
}

// Internal, non-allocating gain with no unit check on `axis`; the callers
// normalize. Returns None when target and position are colocated.
fn pattern_gain(target: &Vec3, position: &Vec3, axis: &Vec3) -> Option<(f64, f64)> {
    let offset = *target - *position;
    let dist_sq = offset.norm_squared();
    if dist_sq < COLOCATION_EPSILON * COLOCATION_EPSILON {
        return None;
    }
    let cos = (offset.dot(axis) / dist_sq.sqrt()).clamp(-1.0, 1.0);
    Some((1.0 - cos * cos, dist_sq))
}

/// Per-node SINR of a pose, one entry per legitimate node.
///
/// Numerator is the node's pattern gain over its squared distance;
/// denominator adds the jammer's gain-weighted interference to the noise
/// ratio. All entries are finite and non-negative.
pub fn sinr_exact(scenario: &Scenario, pose: &Pose) -> Result<Vec<f64>> {
    let axis = pose.antenna_axis();
    sinr_exact_with_axis(scenario, &pose.position, &axis)
}

pub(crate) fn sinr_exact_with_axis(
    scenario: &Scenario,
    position: &Vec3,
    axis: &Vec3,
) -> Result<Vec<f64>> {
    let (jam_gain, jam_dist_sq) = pattern_gain(&scenario.jammer, position, axis)
        .ok_or_else(|| colocation_error("jammer", position))?;
    let denom =
        jam_gain * scenario.powers.pm_over_p / jam_dist_sq + scenario.powers.sigma2_over_p;
    scenario
        .legit_nodes
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let (gain, dist_sq) = pattern_gain(node, position, axis)
                .ok_or_else(|| colocation_error(&format!("node {i}"), position))?;
            Ok(gain / dist_sq / denom)
        })
        .collect()
}

/// Null-steering antenna axis for a position: the unit vector toward the
/// jammer, sign-flipped if needed so its z component is non-negative (the
/// flip leaves every gain unchanged and keeps the pitch inside its bounds).
pub fn zero_interference_orientation(scenario: &Scenario, position: &Vec3) -> Result<Vec3> {
    let toward = (scenario.jammer - *position)
        .normalized()
        .map_err(|_| colocation_error("jammer", position))?;
    Ok(canonical_sign(toward))
}

/// Per-node SINR with the null-steering orientation substituted: the jammer
/// term vanishes identically, so the result does not depend on pm_over_p.
pub fn sinr_zero_interference(scenario: &Scenario, position: &Vec3) -> Result<Vec<f64>> {
    let toward_jammer = (scenario.jammer - *position)
        .normalized()
        .map_err(|_| colocation_error("jammer", position))?;
    scenario
        .legit_nodes
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let offset = *node - *position;
            let dist_sq = offset.norm_squared();
            if dist_sq < COLOCATION_EPSILON * COLOCATION_EPSILON {
                return Err(colocation_error(&format!("node {i}"), position));
            }
            let cos = (offset.dot(&toward_jammer) / dist_sq.sqrt()).clamp(-1.0, 1.0);
            let gain = 1.0 - cos * cos;
            Ok(gain / (dist_sq * scenario.powers.sigma2_over_p))
        })
        .collect()
}

/// Broadside antenna axis for a 2-node scenario: normalized cross product of
/// the two node directions, orthogonal to both so each node sees unit gain.
/// Sign chosen as in [`zero_interference_orientation`].
pub fn max_gain_orientation(scenario: &Scenario, position: &Vec3) -> Result<Vec3> {
    require_two_nodes(scenario, "max_gain")?;
    let u1 = (scenario.legit_nodes[0] - *position)
        .normalized()
        .map_err(|_| colocation_error("node 0", position))?;
    let u2 = (scenario.legit_nodes[1] - *position)
        .normalized()
        .map_err(|_| colocation_error("node 1", position))?;
    let normal = u1.cross(&u2).normalized().map_err(|_| {
        Error::DegenerateGeometry(format!(
            "node directions are parallel from position [{}, {}, {}]",
            position.x, position.y, position.z
        ))
    })?;
    Ok(canonical_sign(normal))
}

/// Per-node SINR with the broadside orientation substituted: both node gains
/// are exactly 1, the jammer keeps whatever gain the cross-product axis
/// leaves it. Only defined for exactly two legitimate nodes.
pub fn sinr_max_gain(scenario: &Scenario, position: &Vec3) -> Result<Vec<f64>> {
    let normal = max_gain_orientation(scenario, position)?;
    let jam_offset = scenario.jammer - *position;
    let jam_dist_sq = jam_offset.norm_squared();
    if jam_dist_sq < COLOCATION_EPSILON * COLOCATION_EPSILON {
        return Err(colocation_error("jammer", position));
    }
    let cos = (jam_offset.dot(&normal) / jam_dist_sq.sqrt()).clamp(-1.0, 1.0);
    let jam_gain = 1.0 - cos * cos;
    let denom =
        jam_gain * scenario.powers.pm_over_p / jam_dist_sq + scenario.powers.sigma2_over_p;
    scenario
        .legit_nodes
        .iter()
        .map(|node| {
            let dist_sq = (*node - *position).norm_squared();
            Ok(1.0 / dist_sq / denom)
        })
        .collect()
}

fn canonical_sign(v: Vec3) -> Vec3 {
    if v.z < 0.0 || (v.z == 0.0 && v.z.is_sign_negative()) {
        -v
    } else {
        v
    }
}

fn require_two_nodes(scenario: &Scenario, strategy: &'static str) -> Result<()> {
    if scenario.legit_nodes.len() != 2 {
        return Err(Error::StrategyInapplicable {
            strategy,
            required: 2,
            actual: scenario.legit_nodes.len(),
        });
    }
    Ok(())
}

fn colocation_error(what: &str, position: &Vec3) -> Error {
    Error::DegenerateGeometry(format!(
        "{what} colocated with base station at [{}, {}, {}]",
        position.x, position.y, position.z
    ))
}
