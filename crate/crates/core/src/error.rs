use thiserror::Error;

use crate::space::SpecError;

/// Errors raised by norm evaluation, pair construction and the estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("dimension mismatch: space has dimension {expected}, vector has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("expected a unit vector, got norm {norm}")]
    NotUnit { norm: f64 },

    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error("expected {expected} direction angles, got {found}")]
    AngleCount { expected: usize, found: usize },

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no sign change found with |alpha| <= {limit}")]
    BracketExhausted { limit: f64 },

    #[error("objective returned {value} at {point:?}")]
    NonFiniteObjective { point: Vec<f64>, value: f64 },

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("{operation} needs a space of dimension {supported}, got {found}")]
    UnsupportedDimension {
        operation: &'static str,
        supported: &'static str,
        found: usize,
    },

    #[error("the two limit forms disagree at t = {t}: {first} vs {second}")]
    FormsDisagree { t: f64, first: f64, second: f64 },

    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),
}

pub type Result<T, E = GeoError> = std::result::Result<T, E>;
