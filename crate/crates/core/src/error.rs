use std::fmt;

use thiserror::Error;

use crate::model::Element;

/// Why a volume is (or may be) missing from a spectrum.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Citation {
    /// Stable short identifier of the backing result.
    pub id: &'static str,
    /// One-line statement of the result.
    pub statement: &'static str,
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.id, self.statement)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("element {0} is not in the foundation")]
    NotInFoundation(Element),

    #[error("mapping is not injective on the foundation: {0} and {1} both map to {2}")]
    NonInjective(Element, Element, Element),

    #[error("fresh element {0} collides with the foundation")]
    FreshCollision(Element),

    #[error("volume {volume} is not in the spectrum: {citation}")]
    NotInSpectrum { volume: usize, citation: Citation },

    #[error("existence of volume {volume} is open: {citation}")]
    UnknownSpectrum { volume: usize, citation: Citation },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("catalog entry `{name}`: {message}")]
    Catalog { name: String, message: String },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
