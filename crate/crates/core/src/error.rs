use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical quantity or configuration field is outside its valid domain.
    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    /// A required section of a scenario configuration is absent.
    #[error("missing configuration section `[{section}]`: {reason}")]
    MissingSection { section: String, reason: String },

    #[error("could not parse configuration: {0}")]
    ConfigParse(String),

    #[error("unknown preset `{name}` (known: {known})")]
    UnknownPreset { name: String, known: String },

    #[error("unknown sweep parameter `{name}` (allowed: {allowed})")]
    UnknownParameter { name: String, allowed: String },

    #[error(
        "quadrature did not converge on [{lower}, {upper}]: estimated error {error:e} \
         after {evaluations} evaluations ({subdivisions} subintervals)"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        error: f64,
        evaluations: usize,
        subdivisions: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error(
        "grid too small: boundary magnitude {boundary:e} exceeds {limit:e} of the slice maximum at t = {time:e}"
    )]
    BoundaryMass { boundary: f64, limit: f64, time: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Whether the error comes from user-supplied configuration rather than
    /// from a numerical failure.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::MissingSection { .. }
                | Error::ConfigParse(_)
                | Error::UnknownPreset { .. }
                | Error::UnknownParameter { .. }
        )
    }
}

/// Checks that `value` is finite and strictly positive.
pub(crate) fn require_positive(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(field, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn require_non_negative(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(field, format!("must be finite and >= 0, got {value}")))
    }
}
