//! Crate-wide error type and exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix has the wrong length for the scenario it is used with.
    #[error("{what}: expected length {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// An argument is outside its mathematical domain (e.g. a quantile level
    /// outside [0, 1] or a nonpositive rate).
    #[error("{0}")]
    Domain(String),

    /// A state assignment violates the cold-standby exclusivity constraint.
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    /// The requested computation is not defined for this scenario
    /// (e.g. exact enumeration of a continuous distribution).
    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),

    /// An enumeration guard was exceeded. The error names the size the
    /// computation would need so the caller can raise the guard deliberately.
    #[error("budget exceeded: {what} requires {required}, guard is {limit}")]
    Budget {
        what: &'static str,
        required: u64,
        limit: u64,
    },

    /// A configuration field failed validation. `field` is the path of the
    /// offending field within the config document.
    #[error("{field}: {message}")]
    Validation { field: String, message: String },

    /// The configuration document could not be parsed at all.
    #[error("config parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit status for this error: 2 for exceeded budget guards,
    /// 1 for everything else (verify's claim-violation status 3 is not an
    /// error and is produced by the CLI directly).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
