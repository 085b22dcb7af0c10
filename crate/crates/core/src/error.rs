use thiserror::Error;

use crate::config::ConfigError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated series whose estimated tail exceeds the requested tolerance.
    #[error("{what}: tail estimate {tail:e} exceeds tolerance {tol:e}")]
    NonConvergence {
        what: &'static str,
        tail: f64,
        tol: f64,
    },

    /// A closed form evaluated so close to a singular point that it is not
    /// representable.
    #[error("overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
