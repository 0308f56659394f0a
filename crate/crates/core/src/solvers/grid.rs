//! Brute-force grid oracle for validating the stochastic solvers.

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scenario::Scenario;

use super::{
    assemble_max_gain, assemble_optimal, assemble_vertical, assemble_zero_interference,
    max_gain_objective, optimal_objective, vertical_objective, zero_interference_objective,
    Solution, Strategy,
};

/// Hard ceiling on oracle grid size.
pub const GRID_EVAL_CAP: u64 = 100_000_000;

/// Per-axis point counts of the oracle grid. The angle counts only apply to
/// the optimal strategy; restricted strategies scan positions alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridResolution {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub n_roll: usize,
    pub n_pitch: usize,
}

impl GridResolution {
    /// Position-only grid; angle axes left at a single point.
    pub fn positions(nx: usize, ny: usize, nz: usize) -> Self {
        GridResolution { nx, ny, nz, n_roll: 1, n_pitch: 1 }
    }

    pub fn full(nx: usize, ny: usize, nz: usize, n_roll: usize, n_pitch: usize) -> Self {
        GridResolution { nx, ny, nz, n_roll, n_pitch }
    }

    fn cells(&self, strategy: Strategy) -> Result<u64> {
        let counts: &[usize] = match strategy {
            Strategy::Optimal => &[self.nx, self.ny, self.nz, self.n_roll, self.n_pitch],
            _ => &[self.nx, self.ny, self.nz],
        };
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::Config("grid resolution counts must all be at least 1".into()));
        }
        let mut total: u64 = 1;
        for &c in counts {
            total = total
                .checked_mul(c as u64)
                .filter(|t| *t <= GRID_EVAL_CAP)
                .ok_or_else(|| {
                    Error::Config(format!("grid cap exceeded: more than {GRID_EVAL_CAP} evaluations"))
                })?;
        }
        Ok(total)
    }
}

/// Evenly spaced samples over [lo, hi] inclusive; the interval midpoint when
/// a single point is requested.
fn axis_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Exhaustively evaluate a strategy's objective on a regular grid over its
/// search space and return the best grid point. Ties keep the first point in
/// scan order (x outermost, then y, z, roll, pitch), so identical inputs give
/// identical output.
pub fn grid_oracle(
    scenario: &Scenario,
    strategy: Strategy,
    resolution: &GridResolution,
) -> Result<Solution> {
    scenario.validate()?;
    let expected_evals = resolution.cells(strategy)?;

    let bounds = &scenario.bounds;
    let xs = axis_points(bounds.x_min, bounds.x_max, resolution.nx);
    let ys = axis_points(bounds.y_min, bounds.y_max, resolution.ny);
    let zs = axis_points(bounds.z_min, bounds.z_max, resolution.nz);

    let mut best_value = f64::NEG_INFINITY;
    let mut best_point: Option<Vec<f64>> = None;
    let mut scan = |objective: &dyn Fn(&[f64]) -> f64, angle_grid: bool| {
        use std::f64::consts::FRAC_PI_2;
        let rolls = axis_points(-FRAC_PI_2, FRAC_PI_2, resolution.n_roll);
        let pitches = axis_points(-FRAC_PI_2, FRAC_PI_2, resolution.n_pitch);
        let mut point = vec![0.0; if angle_grid { 5 } else { 3 }];
        for &x in &xs {
            for &y in &ys {
                for &z in &zs {
                    point[0] = x;
                    point[1] = y;
                    point[2] = z;
                    if angle_grid {
                        for &roll in &rolls {
                            for &pitch in &pitches {
                                point[3] = roll;
                                point[4] = pitch;
                                let v = objective(&point);
                                if v > best_value {
                                    best_value = v;
                                    best_point = Some(point.clone());
                                }
                            }
                        }
                    } else {
                        let v = objective(&point);
                        if v > best_value {
                            best_value = v;
                            best_point = Some(point.clone());
                        }
                    }
                }
            }
        }
    };

    match strategy {
        Strategy::Optimal => scan(&optimal_objective(scenario), true),
        Strategy::ZeroInterference => scan(&zero_interference_objective(scenario), false),
        Strategy::MaxGain => {
            if scenario.legit_nodes.len() != 2 {
                return Err(Error::StrategyInapplicable {
                    strategy: "max_gain",
                    required: 2,
                    actual: scenario.legit_nodes.len(),
                });
            }
            scan(&max_gain_objective(scenario), false)
        }
        Strategy::Vertical => scan(&vertical_objective(scenario), false),
    }

    let point = best_point.filter(|_| best_value > f64::NEG_INFINITY).ok_or_else(|| {
        Error::DegenerateGeometry("no finite objective value on the oracle grid".into())
    })?;
    let position = Vec3::new(point[0], point[1], point[2]);
    match strategy {
        Strategy::Optimal => assemble_optimal(scenario, position, point[3], point[4], expected_evals),
        Strategy::ZeroInterference => assemble_zero_interference(scenario, position, expected_evals),
        Strategy::MaxGain => assemble_max_gain(scenario, position, expected_evals),
        Strategy::Vertical => assemble_vertical(scenario, position, expected_evals),
    }
}
