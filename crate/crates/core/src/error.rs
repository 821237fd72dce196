use thiserror::Error;

use crate::transform::InverseConvention;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} is outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("sample is empty")]
    EmptySample,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("sample has zero variance")]
    DegenerateSample,

    #[error("{test} requires {min} <= n <= {max}, got n = {n}")]
    UnsupportedSize {
        test: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("value {value} at index {index} is not positive; Box-Cox requires y > 0")]
    NonPositive { index: usize, value: f64 },

    #[error("inverse transform ({convention}) undefined at index {index} for value {value}")]
    InverseDomain {
        index: usize,
        value: f64,
        convention: InverseConvention,
    },

    #[error("invalid lambda grid: {0}")]
    InvalidGrid(String),

    #[error(
        "optimum stayed on the grid boundary after {expansions} expansions \
         (best lambda {best_lambda} on [{lower}, {upper}])"
    )]
    NonInteriorOptimum {
        best_lambda: f64,
        lower: f64,
        upper: f64,
        expansions: usize,
    },

    #[error("estimation failed: {0}")]
    EstimationFailed(String),

    #[error("least-squares design is singular (constant covariate)")]
    Singular,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
