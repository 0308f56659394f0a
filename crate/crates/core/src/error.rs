//! Error type shared across the library.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A vector that must be a unit direction is not (norm outside 1 ± 1e-9).
    #[error("invalid direction: expected a unit vector, got norm {norm}")]
    InvalidDirection { norm: f64 },

    /// Geometry that makes the model singular: colocated points, parallel
    /// node directions for the max-gain orientation, and the like.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A strategy was asked to run on a scenario it does not apply to.
    #[error("strategy {strategy} requires exactly {required} legitimate nodes, scenario has {actual}")]
    StrategyInapplicable {
        strategy: &'static str,
        required: usize,
        actual: usize,
    },

    /// Neither sign of the closed-form orientation yields roll/pitch within
    /// the feasible angle ranges.
    #[error("infeasible orientation at position [{x}, {y}, {z}]: no sign choice keeps roll and pitch within bounds")]
    InfeasibleOrientation { x: f64, y: f64, z: f64 },

    /// Bad solver or grid configuration (empty box, zero restarts, grid cap).
    #[error("configuration error: {0}")]
    Config(String),

    /// A scenario violates a model invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A scenario file could not be parsed.
    #[error("parse error in {path}: {detail}")]
    Parse { path: PathBuf, detail: String },

    /// File-system failure, with the offending path.
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
