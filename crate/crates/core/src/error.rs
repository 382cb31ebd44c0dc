use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid fuzzy set: {0}")]
    InvalidFuzzySet(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("infeasible resolution: {0}")]
    Infeasible(String),

    /// A hard resource guard (support cap, tuple cap) was hit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("config error at line {line}, [{section}] {key}: {message}")]
    Config {
        line: usize,
        section: String,
        key: String,
        message: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
