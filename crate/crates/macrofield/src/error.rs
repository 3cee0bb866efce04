use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("schema error: missing column `{0}`")]
    MissingColumn(String),
    #[error("gap in years: {prev} is followed by {next}")]
    YearGap { prev: i32, next: i32 },
    #[error("validation error at row {row}: {msg}")]
    Validation { row: usize, msg: String },
    #[error("no records")]
    Empty,
    #[error("parse error at row {row}, column `{column}`: cannot read `{value}`")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("characteristic time is imaginary for phi = {0} (requires phi < 0)")]
    ImaginaryTime(f64),
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("no maximum: repression coefficient a_K = {0} must be positive")]
    NoMaximum(f64),
    #[error("fit did not converge after {iterations} iterations (last step {last_step:e}, rms {rms:e})")]
    NoConvergence {
        iterations: usize,
        last_step: f64,
        rms: f64,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Coarse grouping used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Numeric,
    Fit,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::MissingColumn(_)
            | Error::YearGap { .. }
            | Error::Validation { .. }
            | Error::Empty
            | Error::Parse { .. }
            | Error::InvalidParameter(_)
            | Error::Config(_)
            | Error::Dimension { .. } => ErrorClass::Input,
            Error::ImaginaryTime(_)
            | Error::Pole(_)
            | Error::Domain(_)
            | Error::Degenerate(_)
            | Error::NoMaximum(_) => ErrorClass::Numeric,
            Error::NoConvergence { .. } => ErrorClass::Fit,
        }
    }
}
