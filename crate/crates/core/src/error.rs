use thiserror::Error;

use crate::report::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("metric is singular")]
    SingularMetric,

    #[error("metric is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("flag is degenerate: the two vectors do not span a plane")]
    DegenerateFlag,

    #[error("drift has norm {norm} >= 1; F is not a Finsler metric")]
    DriftTooLarge { norm: f64 },

    #[error("flagpole is the zero vector")]
    ZeroPole,

    #[error("drift is not parallel; the Randers metric is not of Berwald type")]
    NotBerwald,

    #[error("closed-form denominator vanishes")]
    DegenerateDenominator,

    #[error("unknown catalog case {0:?}")]
    UnknownCase(String),

    #[error("not a Lie algebra:\n{0}")]
    InvalidAlgebra(ValidationReport),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
