use thiserror::Error;

/// Errors raised by validation and by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max entrywise deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("state vector has norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("Kraus operators violate completeness (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("difference of two infinite relative entropies is indeterminate")]
    Indeterminate,

    #[error("task {task} is not available for channel kind {kind}")]
    Unsupported { kind: String, task: String },

    #[error("a zero-cost state is required: {0}")]
    MissingZeroCostState(&'static str),

    #[error("zero-cost state has cost {0:.3e}, expected 0")]
    NotZeroCost(f64),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Short name of the violated check, used in CLI diagnostics.
    pub fn check_name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension-match",
            Error::NotHermitian(_) => "hermitian",
            Error::NotUnitTrace(_) => "unit-trace",
            Error::NotPsd(_) => "positive-semidefinite",
            Error::NotNormalized(_) => "unit-norm",
            Error::NotTracePreserving(_) => "kraus-completeness",
            Error::DimensionCap { .. } => "dimension-cap",
            Error::InvalidParameter { .. } => "parameter-range",
            Error::Indeterminate => "indeterminate-difference",
            Error::Unsupported { .. } => "supported-task",
            Error::MissingZeroCostState(_) => "zero-cost-state-present",
            Error::NotZeroCost(_) => "zero-cost-state-cost",
            Error::Parse(_) => "well-formed-input",
        }
    }

    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
