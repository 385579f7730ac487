use std::path::PathBuf;

use crate::energy::{ConvergenceReport, Field2D};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate tensor: {0}")]
    DegenerateTensor(String),

    #[error("tensor norm {norm:e} is below the floor {floor:e}")]
    NearZeroTensor { norm: f64, floor: f64 },

    #[error("invalid mesh or seed specification: {0}")]
    InvalidSpec(String),

    #[error("boundary condition violated at node ({i}, {j}) by {deviation:e}")]
    BoundaryViolation { i: usize, j: usize, deviation: f64 },

    /// The 1D profile minimizer ran out of iterations. Carries the last iterate.
    #[error("profile minimizer did not converge in {iterations} iterations (residual {residual:e})")]
    ProfileNotConverged {
        iterations: usize,
        residual: f64,
        value: f64,
        path: Vec<f64>,
    },

    /// The field minimizer could not find a descent step. Carries the last
    /// accepted field and its report.
    #[error("solver stalled: {}", .0.1.message)]
    SolverStall(Box<(Field2D, ConvergenceReport)>),

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
