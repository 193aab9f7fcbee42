use std::path::PathBuf;

use thiserror::Error;

use crate::fitting::FitError;
use crate::gpa::GpaError;
use crate::io::FormatError;
use crate::morphology::MorphologyError;
use crate::tlm::TlmError;
use crate::transport::TransportError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Gpa(#[from] GpaError),
    #[error(transparent)]
    Morphology(#[from] MorphologyError),
    #[error(transparent)]
    Tlm(#[from] TlmError),
    #[error("parameter {key}: {message}")]
    BadValue { key: String, message: String },
    #[error("{0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Stable error classes of the command-line surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Domain,
    Fit,
}

impl ErrorCategory {
    pub fn prefix(self) -> &'static str {
        match self {
            ErrorCategory::Parse => "error[parse]",
            ErrorCategory::Domain => "error[domain]",
            ErrorCategory::Fit => "error[fit]",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Parse => 2,
            ErrorCategory::Domain | ErrorCategory::Fit => 1,
        }
    }
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Format(_) | Error::BadValue { .. } => ErrorCategory::Parse,
            Error::Fit(
                FitError::Degenerate { .. }
                | FitError::InsufficientFieldRange
                | FitError::BaseNotConverged(_),
            ) => ErrorCategory::Fit,
            _ => ErrorCategory::Domain,
        }
    }
}
