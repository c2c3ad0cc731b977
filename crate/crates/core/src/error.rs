use thiserror::Error;

/// Errors produced by the library.
///
/// `Input` covers malformed arguments and violated preconditions, `Capacity`
/// covers the desk-scale guards that keep exhaustive computations bounded.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
