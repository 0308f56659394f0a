//! The four pose-selection strategies and their shared search machinery.
//!
//! All strategies maximize the minimum per-node SINR. The full problem
//! searches position and orientation together (5 dimensions); the
//! zero-interference, maximum-gain, and vertical strategies fix the
//! orientation by a closed-form rule and search position only. The global
//! stage is multi-start simulated annealing; every candidate is then polished
//! with Nelder-Mead and a compass pattern search. The full solver also seeds
//! its search with the restricted strategies' solutions, so its objective
//! can only improve on theirs.
//!
//! Every solver is a pure function of (scenario, config): identical seeds
//! give identical solutions, and restarts draw independent random streams so
//! the outcome would not change if they ran concurrently.

mod anneal;
mod grid;
mod polish;

pub use grid::{grid_oracle, GridResolution, GRID_EVAL_CAP};

use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    sinr_exact, sinr_exact_with_axis, sinr_max_gain, sinr_zero_interference,
    max_gain_orientation, zero_interference_orientation, Pose,
};
use crate::error::{Error, Result};
use crate::geometry::{
    angles_from_direction, orientation_vector, EulerAngles, Vec3, COLOCATION_EPSILON,
};
use crate::scenario::Scenario;

use anneal::{anneal, AnnealSchedule};
use polish::{nelder_mead, pattern_polish};

/// Slack allowed on |roll|, |pitch| ≤ π/2 when checking realized orientations.
const ANGLE_TOLERANCE: f64 = 1e-12;

/// Axis-aligned feasible region for the station position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl SearchBox {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.x_min, self.x_max, self.y_min, self.y_max, self.z_min, self.z_max,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("search box bounds must be finite".into()));
        }
        if self.x_min > self.x_max || self.y_min > self.y_max || self.z_min > self.z_max {
            return Err(Error::Validation(format!(
                "inverted search box bounds: x [{}, {}], y [{}, {}], z [{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max, self.z_min, self.z_max
            )));
        }
        if !(self.z_min > 0.0) {
            return Err(Error::Validation(format!(
                "minimum altitude must be positive, got {}",
                self.z_min
            )));
        }
        Ok(())
    }

    pub fn center(&self) -> Vec3 {
        Vec3::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
            0.5 * (self.z_min + self.z_max),
        )
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        let tol = 1e-9;
        p.x >= self.x_min - tol
            && p.x <= self.x_max + tol
            && p.y >= self.y_min - tol
            && p.y <= self.y_max + tol
            && p.z >= self.z_min - tol
            && p.z <= self.z_max + tol
    }

    pub fn position_axes(&self) -> [(f64, f64); 3] {
        [
            (self.x_min, self.x_max),
            (self.y_min, self.y_max),
            (self.z_min, self.z_max),
        ]
    }
}

/// Tuning knobs of the global search. All randomness flows from `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    pub restarts: usize,
    pub anneal_iterations: usize,
    /// Starting temperature in units of the unjammed SINR at the box center.
    pub initial_temperature: f64,
    pub cooling_factor: f64,
    /// Objective-units stopping tolerance of the Nelder-Mead polish; also the
    /// slack the full solver is allowed relative to the restricted ones.
    pub polish_tolerance: f64,
    pub max_polish_evals: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            restarts: 16,
            anneal_iterations: 2000,
            initial_temperature: 1.0,
            cooling_factor: 0.995,
            polish_tolerance: 1e-6,
            max_polish_evals: 4000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if self.anneal_iterations < 1 {
            return Err(Error::Config("anneal_iterations must be at least 1".into()));
        }
        if !(self.initial_temperature > 0.0) {
            return Err(Error::Config(format!(
                "initial_temperature must be positive, got {}",
                self.initial_temperature
            )));
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(Error::Config(format!(
                "cooling_factor must be in (0, 1), got {}",
                self.cooling_factor
            )));
        }
        if !(self.polish_tolerance > 0.0) {
            return Err(Error::Config(format!(
                "polish_tolerance must be positive, got {}",
                self.polish_tolerance
            )));
        }
        if self.max_polish_evals < 1 {
            return Err(Error::Config("max_polish_evals must be at least 1".into()));
        }
        Ok(())
    }
}

/// The four pose-selection strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Optimal,
    ZeroInterference,
    MaxGain,
    Vertical,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Optimal,
        Strategy::ZeroInterference,
        Strategy::MaxGain,
        Strategy::Vertical,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Optimal => "optimal",
            Strategy::ZeroInterference => "zero_interference",
            Strategy::MaxGain => "max_gain",
            Strategy::Vertical => "vertical",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s.replace('-', "_").as_str() {
            "optimal" => Ok(Strategy::Optimal),
            "zero_interference" => Ok(Strategy::ZeroInterference),
            "max_gain" => Ok(Strategy::MaxGain),
            "vertical" => Ok(Strategy::Vertical),
            other => Err(Error::Config(format!(
                "unknown strategy '{other}' (expected optimal, zero-interference, max-gain, or vertical)"
            ))),
        }
    }
}

/// Result of one solve: the chosen pose, its per-node SINRs, and diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub pose: Pose,
    pub per_node_sinr: Vec<f64>,
    /// Minimum of `per_node_sinr`, the value the solver maximizes.
    pub objective: f64,
    pub strategy: Strategy,
    /// Objective evaluations spent, including warm-start sub-solves.
    pub evals: u64,
    pub feasible: bool,
}

/// Dispatch to the solver for `strategy`.
pub fn solve(scenario: &Scenario, strategy: Strategy, config: &SolverConfig) -> Result<Solution> {
    match strategy {
        Strategy::Optimal => solve_optimal(scenario, config),
        Strategy::ZeroInterference => solve_zero_interference(scenario, config),
        Strategy::MaxGain => solve_max_gain(scenario, config),
        Strategy::Vertical => solve_vertical(scenario, config),
    }
}

/// Full pose optimization over position, roll, and pitch.
///
/// The search runs the three restricted strategies first and polishes their
/// poses in the full 5-D space alongside the seeded annealing restarts, so
/// the returned objective is never below theirs by more than rounding.
pub fn solve_optimal(scenario: &Scenario, config: &SolverConfig) -> Result<Solution> {
    scenario.validate()?;
    config.validate()?;

    let mut warm_starts: Vec<Vec<f64>> = Vec::new();
    let mut warm_evals = 0u64;
    let vertical = solve_vertical(scenario, config)?;
    warm_evals += vertical.evals;
    warm_starts.push(pose_coordinates(&vertical.pose));
    match solve_zero_interference(scenario, config) {
        Ok(s) => {
            warm_evals += s.evals;
            warm_starts.push(pose_coordinates(&s.pose));
        }
        Err(Error::Config(e)) => return Err(Error::Config(e)),
        Err(_) => {}
    }
    if scenario.legit_nodes.len() == 2 {
        if let Ok(s) = solve_max_gain(scenario, config) {
            warm_evals += s.evals;
            warm_starts.push(pose_coordinates(&s.pose));
        }
    }

    let axes = scenario.bounds.position_axes();
    let domain = [
        axes[0],
        axes[1],
        axes[2],
        (-FRAC_PI_2, FRAC_PI_2),
        (-FRAC_PI_2, FRAC_PI_2),
    ];
    let objective = optimal_objective(scenario);
    let outcome = run_search(scenario, &domain, &objective, config, &warm_starts, SALT_OPTIMAL)?;
    let mut solution = assemble_optimal(
        scenario,
        Vec3::new(outcome.x[0], outcome.x[1], outcome.x[2]),
        outcome.x[3],
        outcome.x[4],
        outcome.evals,
    )?;
    solution.evals += warm_evals;
    Ok(solution)
}

/// Position-only optimization with the antenna null held on the jammer.
pub fn solve_zero_interference(scenario: &Scenario, config: &SolverConfig) -> Result<Solution> {
    scenario.validate()?;
    config.validate()?;
    let objective = zero_interference_objective(scenario);
    let outcome = run_search(
        scenario,
        &scenario.bounds.position_axes(),
        &objective,
        config,
        &[],
        SALT_ZERO_INTERFERENCE,
    )?;
    assemble_zero_interference(
        scenario,
        Vec3::new(outcome.x[0], outcome.x[1], outcome.x[2]),
        outcome.evals,
    )
}

/// Position-only optimization with unit gain held on both legitimate nodes.
/// Requires exactly two nodes.
pub fn solve_max_gain(scenario: &Scenario, config: &SolverConfig) -> Result<Solution> {
    scenario.validate()?;
    config.validate()?;
    if scenario.legit_nodes.len() != 2 {
        return Err(Error::StrategyInapplicable {
            strategy: "max_gain",
            required: 2,
            actual: scenario.legit_nodes.len(),
        });
    }
    let objective = max_gain_objective(scenario);
    let outcome = run_search(
        scenario,
        &scenario.bounds.position_axes(),
        &objective,
        config,
        &[],
        SALT_MAX_GAIN,
    )?;
    assemble_max_gain(
        scenario,
        Vec3::new(outcome.x[0], outcome.x[1], outcome.x[2]),
        outcome.evals,
    )
}

/// Position-only optimization with the antenna locked to gravity, the
/// hovering under-actuated baseline.
pub fn solve_vertical(scenario: &Scenario, config: &SolverConfig) -> Result<Solution> {
    scenario.validate()?;
    config.validate()?;
    let objective = vertical_objective(scenario);
    let outcome = run_search(
        scenario,
        &scenario.bounds.position_axes(),
        &objective,
        config,
        &[],
        SALT_VERTICAL,
    )?;
    assemble_vertical(
        scenario,
        Vec3::new(outcome.x[0], outcome.x[1], outcome.x[2]),
        outcome.evals,
    )
}

// ---------------------------------------------------------------------------
// Objective builders, shared by the solvers and the grid oracle.
// ---------------------------------------------------------------------------

fn min_or_neg_inf(values: Result<Vec<f64>>) -> f64 {
    match values {
        Ok(v) => v.into_iter().fold(f64::INFINITY, f64::min),
        Err(_) => f64::NEG_INFINITY,
    }
}

pub(crate) fn optimal_objective(scenario: &Scenario) -> impl Fn(&[f64]) -> f64 + '_ {
    move |x| {
        let position = Vec3::new(x[0], x[1], x[2]);
        let axis = orientation_vector(&EulerAngles::yaw_free(x[3], x[4]));
        min_or_neg_inf(sinr_exact_with_axis(scenario, &position, &axis))
    }
}

pub(crate) fn zero_interference_objective(scenario: &Scenario) -> impl Fn(&[f64]) -> f64 + '_ {
    move |x| {
        let position = Vec3::new(x[0], x[1], x[2]);
        min_or_neg_inf(sinr_zero_interference(scenario, &position))
    }
}

pub(crate) fn max_gain_objective(scenario: &Scenario) -> impl Fn(&[f64]) -> f64 + '_ {
    move |x| {
        let position = Vec3::new(x[0], x[1], x[2]);
        min_or_neg_inf(sinr_max_gain(scenario, &position))
    }
}

pub(crate) fn vertical_objective(scenario: &Scenario) -> impl Fn(&[f64]) -> f64 + '_ {
    let up = Vec3::new(0.0, 0.0, 1.0);
    move |x| {
        let position = Vec3::new(x[0], x[1], x[2]);
        min_or_neg_inf(sinr_exact_with_axis(scenario, &position, &up))
    }
}

// ---------------------------------------------------------------------------
// Solution assembly, shared by the solvers and the grid oracle.
// ---------------------------------------------------------------------------

fn objective_of(per_node: &[f64]) -> f64 {
    per_node.iter().copied().fold(f64::INFINITY, f64::min)
}

fn pose_feasible(scenario: &Scenario, pose: &Pose) -> bool {
    scenario.bounds.contains(&pose.position)
        && pose.angles.roll.abs() <= FRAC_PI_2 + ANGLE_TOLERANCE
        && pose.angles.pitch.abs() <= FRAC_PI_2 + ANGLE_TOLERANCE
        && pose.angles.yaw == 0.0
}

fn finish(scenario: &Scenario, pose: Pose, per_node: Vec<f64>, strategy: Strategy, evals: u64) -> Solution {
    let objective = objective_of(&per_node);
    let feasible = objective.is_finite() && pose_feasible(scenario, &pose);
    Solution { pose, per_node_sinr: per_node, objective, strategy, evals, feasible }
}

fn checked_angles(position: &Vec3, axis: &Vec3) -> Result<EulerAngles> {
    let angles = angles_from_direction(axis)?;
    if angles.roll.abs() > FRAC_PI_2 + ANGLE_TOLERANCE
        || angles.pitch.abs() > FRAC_PI_2 + ANGLE_TOLERANCE
    {
        return Err(Error::InfeasibleOrientation {
            x: position.x,
            y: position.y,
            z: position.z,
        });
    }
    Ok(angles)
}

pub(crate) fn assemble_optimal(
    scenario: &Scenario,
    position: Vec3,
    roll: f64,
    pitch: f64,
    evals: u64,
) -> Result<Solution> {
    let pose = Pose::new(position, EulerAngles::yaw_free(roll, pitch));
    let per_node = sinr_exact(scenario, &pose)?;
    Ok(finish(scenario, pose, per_node, Strategy::Optimal, evals))
}

pub(crate) fn assemble_zero_interference(
    scenario: &Scenario,
    position: Vec3,
    evals: u64,
) -> Result<Solution> {
    let axis = zero_interference_orientation(scenario, &position)?;
    let angles = checked_angles(&position, &axis)?;
    let per_node = sinr_zero_interference(scenario, &position)?;
    let pose = Pose::new(position, angles);
    Ok(finish(scenario, pose, per_node, Strategy::ZeroInterference, evals))
}

pub(crate) fn assemble_max_gain(
    scenario: &Scenario,
    position: Vec3,
    evals: u64,
) -> Result<Solution> {
    let axis = max_gain_orientation(scenario, &position)?;
    let angles = checked_angles(&position, &axis)?;
    let per_node = sinr_max_gain(scenario, &position)?;
    let pose = Pose::new(position, angles);
    Ok(finish(scenario, pose, per_node, Strategy::MaxGain, evals))
}

pub(crate) fn assemble_vertical(
    scenario: &Scenario,
    position: Vec3,
    evals: u64,
) -> Result<Solution> {
    let pose = Pose::new(position, EulerAngles::ZERO);
    let per_node = sinr_exact(scenario, &pose)?;
    Ok(finish(scenario, pose, per_node, Strategy::Vertical, evals))
}

fn pose_coordinates(pose: &Pose) -> Vec<f64> {
    vec![
        pose.position.x,
        pose.position.y,
        pose.position.z,
        pose.angles.roll,
        pose.angles.pitch,
    ]
}

// ---------------------------------------------------------------------------
// Search driver.
// ---------------------------------------------------------------------------

const SALT_OPTIMAL: u64 = 0;
const SALT_ZERO_INTERFERENCE: u64 = 1;
const SALT_MAX_GAIN: u64 = 2;
const SALT_VERTICAL: u64 = 3;

/// Objective wrapper that counts evaluations.
pub(crate) struct Counted<'a> {
    pub f: &'a dyn Fn(&[f64]) -> f64,
    pub count: &'a Cell<u64>,
}

impl Counted<'_> {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.count.set(self.count.get() + 1);
        (self.f)(x)
    }

    pub fn count(&self) -> u64 {
        self.count.get()
    }
}

struct SearchOutcome {
    x: Vec<f64>,
    #[allow(dead_code)]
    objective: f64,
    evals: u64,
}

/// Independent random stream per (seed, strategy, restart).
fn restart_seed(seed: u64, salt: u64, restart: u64) -> u64 {
    let mut z = seed
        .wrapping_add(salt.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(restart.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reference objective scale: the unjammed unit-gain SINR of the worst node
/// as seen from the box center. Multiplies the configured temperature.
fn reference_sinr(scenario: &Scenario) -> f64 {
    let center = scenario.bounds.center();
    scenario
        .legit_nodes
        .iter()
        .map(|node| {
            let dist_sq = (center - *node).norm_squared().max(1e-12);
            1.0 / dist_sq / scenario.powers.sigma2_over_p
        })
        .fold(f64::INFINITY, f64::min)
}

fn run_search(
    scenario: &Scenario,
    domain: &[(f64, f64)],
    objective: &dyn Fn(&[f64]) -> f64,
    config: &SolverConfig,
    warm_starts: &[Vec<f64>],
    salt: u64,
) -> Result<SearchOutcome> {
    scenario.bounds.validate()?;
    let count = Cell::new(0);
    let counted = Counted { f: objective, count: &count };

    // Proposals and random starts may not land on top of a node.
    let guard = |x: &[f64]| {
        let p = Vec3::new(x[0], x[1], x[2]);
        scenario
            .legit_nodes
            .iter()
            .chain(std::iter::once(&scenario.jammer))
            .all(|node| p.distance_to(node) > COLOCATION_EPSILON)
    };

    let schedule = AnnealSchedule {
        iterations: config.anneal_iterations,
        initial_temperature: config.initial_temperature * reference_sinr(scenario),
        cooling_factor: config.cooling_factor,
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    let consider = |x: Vec<f64>, value: f64, best: &mut Option<(Vec<f64>, f64)>| {
        if best.as_ref().map_or(true, |(_, v)| value > *v) {
            *best = Some((x, value));
        }
    };

    for warm in warm_starts {
        let (x1, _) = nelder_mead(domain, &counted, warm, config.polish_tolerance, config.max_polish_evals);
        let (x2, v2) = pattern_polish(domain, &counted, &x1);
        consider(x2, v2, &mut best);
    }

    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(config.seed, salt, restart as u64));
        let start = sample_start(&mut rng, domain, &guard);
        let (x_anneal, _) = anneal(&mut rng, domain, &counted, &guard, start, &schedule);
        let (x1, _) = nelder_mead(
            domain,
            &counted,
            &x_anneal,
            config.polish_tolerance,
            config.max_polish_evals,
        );
        let (x2, v2) = pattern_polish(domain, &counted, &x1);
        consider(x2, v2, &mut best);
    }

    let (x, objective) = best.expect("at least one restart ran");
    Ok(SearchOutcome { x, objective, evals: count.get() })
}

fn sample_start<R: Rng>(
    rng: &mut R,
    domain: &[(f64, f64)],
    guard: &dyn Fn(&[f64]) -> bool,
) -> Vec<f64> {
    let mut sample = vec![0.0; domain.len()];
    for _ in 0..128 {
        for (i, (lo, hi)) in domain.iter().enumerate() {
            sample[i] = if hi > lo { rng.gen_range(*lo..=*hi) } else { *lo };
        }
        if guard(&sample) {
            return sample;
        }
    }
    sample
}
