use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("index {index} out of range for sequence of length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("series diverges: convergence gate fails at partial index {index} ({detail})")]
    Divergent { index: usize, detail: String },

    #[error("degenerate sequence: z_{i} = z_{j}")]
    Degenerate { i: usize, j: usize },

    #[error("pole collision: x = -z_{index}")]
    Pole { index: usize },

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { field, reason: reason.into() }
}
