use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient sampling: {0}")]
    Sampling(String),

    #[error("no exact revival period for a {0} rotor")]
    NoExactPeriod(&'static str),

    #[error("singular triangular system: diagonal entry {index} is {value:e}")]
    Singular { index: usize, value: f64 },

    #[error("block and rotor disagree: {0}")]
    Mismatch(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
