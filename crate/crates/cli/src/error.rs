//! Front-end error type: configuration, file-format, and runtime failures.

use thiserror::Error;
use upqi_core::CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed configuration line.
    #[error("config line {line}: {message}")]
    ParseError { line: usize, message: String },

    /// Key not part of the configuration schema.
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    /// Configuration value outside its admissible range.
    #[error("config line {line}: `{key}` out of range")]
    OutOfRange { line: usize, key: String },

    /// Structurally invalid object file.
    #[error("object format error: {0}")]
    FormatError(String),

    /// Object grid with missing pixels.
    #[error("incomplete object grid: {0}")]
    IncompleteGrid(String),

    /// Object value outside its admissible range.
    #[error("object value out of range: {0}")]
    ValueOutOfRange(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] CoreError),

    /// Bad `UPQI_WORKERS` override.
    #[error("UPQI_WORKERS must be a positive integer, got `{0}`")]
    BadWorkerCount(String),
}
