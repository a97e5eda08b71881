use thiserror::Error;

use crate::report::CheckReport;

/// Errors produced by grid construction, file I/O, and the patchwork operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("meshes do not match: {0}")]
    MeshMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {point:?} outside mesh range on axis {axis}")]
    OutOfRange { axis: usize, point: Vec<f64> },

    #[error("value undefined at node {node:?} (masked out)")]
    UndefinedValue { node: Vec<usize> },

    #[error("rectangle volume {volume} is numerically degenerate")]
    DegenerateVolume { volume: f64 },

    #[error("normalized margin on axis {axis} is not increasing (step {step} at node {node})")]
    NonMonotoneMargin { axis: usize, node: usize, step: f64 },

    #[error("boundary functions violate conditions: {0}")]
    BoundaryViolation(CheckReport),

    #[error("input violates quasi-copula axioms: {0}")]
    AxiomViolation(CheckReport),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
