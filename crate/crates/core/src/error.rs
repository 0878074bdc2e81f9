use thiserror::Error;

use crate::link::LinkError;
use crate::quant::FootprintReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A weights file, profile or report could not be decoded.
    #[error("format error in `{field}`: {reason}")]
    Format { field: String, reason: String },

    #[error("unsupported wav: {0}")]
    Wav(String),

    #[error(
        "model does not fit the device: {} bytes needed, limit {} bytes",
        .0.total_bytes,
        .0.limit_bytes
    )]
    DoesNotFit(FootprintReport),

    #[error(transparent)]
    Link(#[from] LinkError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn format(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
