use std::fmt;

use thiserror::Error;

/// Position inside a text document, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{format} parse error at {pos}: {message}")]
    Parse {
        format: &'static str,
        pos: Position,
        message: String,
    },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model has no valid configuration")]
    ModelUnsatisfiable,
    #[error("strength {t} out of range for {n_params} parameters")]
    StrengthOutOfRange { t: usize, n_params: usize },
    #[error("cannot express in {format}: {reason}")]
    Inexpressible {
        format: &'static str,
        reason: String,
    },
    #[error("test {test} has an empty cell for parameter {param}")]
    EmptyCell { test: usize, param: usize },
    #[error("model and suite do not match: {0}")]
    SuiteMismatch(String),
    #[error("enumeration of {required} assignments exceeds the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unit propagation conflict: fixed literals contradict the formula")]
    Conflict,
    #[error("generation failed: {0}")]
    GenerationFailed(crate::sutgen::FailReason),
    #[error("SAT engine failure: {0}")]
    Engine(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(format: &'static str, line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            format,
            pos: Position { line, column },
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
