use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the arithmetic and measure engines.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The polynomial has no strictly dominant coefficient, so it vanishes
    /// somewhere on the p-adic torus and its Mahler measures do not exist.
    #[error("polynomial vanishes on the p-adic torus; p-adic Mahler measures are undefined")]
    Nonvanishing,

    /// Malformed textual input (literals, polynomial JSON, indices).
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
