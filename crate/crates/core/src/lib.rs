//! Pose selection for an omnidirectional aerial base station serving ground
//! nodes while a jammer transmits nearby.
//!
//! The station carries a single dipole antenna whose axis follows the
//! vehicle's roll and pitch, so position and orientation together decide
//! every link's gain. This crate models the resulting per-node SINRs and
//! finds poses that maximize the worst one, four ways:
//!
//! - **optimal** — global search over position, roll, and pitch;
//! - **zero_interference** — the antenna null is held on the jammer (its
//!   interference vanishes) and only the position is optimized;
//! - **max_gain** — for two nodes, the axis is held orthogonal to both node
//!   directions (both see unit gain) and only the position is optimized;
//! - **vertical** — the axis is locked to gravity, the hovering baseline of
//!   an under-actuated vehicle.
//!
//! A brute-force grid oracle ([`solvers::grid_oracle`]) validates the
//! stochastic solvers, and [`scenario`] handles JSON scenario files and the
//! results CSV consumed by the plotting workflow.

pub mod channel;
pub mod error;
pub mod geometry;
pub mod scenario;
pub mod solvers;

pub use channel::{
    dipole_gain, link_gain, max_gain_orientation, sinr_exact, sinr_max_gain,
    sinr_zero_interference, zero_interference_orientation, Pose, PowerParams,
};
pub use error::{Error, Result};
pub use geometry::{
    angles_from_direction, aoa_cosine, orientation_vector, EulerAngles, Vec3,
    COLOCATION_EPSILON,
};
pub use scenario::{default_search_box, save_results, Scenario, SweepSpec, RESULTS_CSV_HEADER};
pub use solvers::{
    grid_oracle, solve, solve_max_gain, solve_optimal, solve_vertical,
    solve_zero_interference, GridResolution, SearchBox, Solution, SolverConfig, Strategy,
    GRID_EVAL_CAP,
};
