use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum HhError {
    #[error("degenerate simplex: volume {volume:e} below threshold {threshold:e}")]
    DegenerateSimplex { volume: f64, threshold: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate in input")]
    NonFiniteCoordinate,

    #[error("barycentric solve failed: system is numerically singular")]
    SolveFailure,

    #[error("barycentric weights sum to {sum}, expected 1")]
    WeightSumError { sum: f64 },

    #[error("failed to draw a non-degenerate simplex after {attempts} attempts")]
    GenerationFailure { attempts: usize },

    #[error("non-finite function value at sample {index}")]
    NonFiniteSample { index: usize },

    #[error("matrix is not positive semidefinite")]
    NotPsd,

    #[error("modulus must be positive, got {0}")]
    InvalidModulus(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function class {0} carries no modulus")]
    WrongClass(String),

    #[error("symmetrized additive part is not constant: probe {probe} gives {value}, expected {expected}")]
    ConstancyViolation {
        probe: usize,
        value: f64,
        expected: f64,
    },

    #[error("functional fails moment matching on coordinate {coordinate}: {got} vs mean {expected}")]
    MomentMismatch {
        coordinate: usize,
        got: f64,
        expected: f64,
    },

    #[error("exact integration requested but the function has no polynomial form")]
    NoPolynomialForm,

    #[error("family {family} is not applicable to function class {class}")]
    FamilyNotApplicable { family: String, class: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, HhError>;
