use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A mathematically undefined request, e.g. the valuation of zero.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported place: {0}")]
    UnsupportedPlace(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// A configured enumeration or factorization budget was exhausted. The
    /// computation stopped; no answer was produced.
    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degenerate map: {0}")]
    DegenerateMap(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}
