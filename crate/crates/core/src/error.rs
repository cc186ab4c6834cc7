use thiserror::Error;

/// Errors raised by the library. Messages carry the module that produced them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tensor: dimension mismatch: {0}")]
    Dimension(String),

    #[error("tensor: matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("tensor: matrix is indefinite (min eigenvalue {0:.3e})")]
    Indefinite(f64),

    #[error("state: {0}")]
    InvalidState(String),

    #[error("{module}: invalid argument: {msg}")]
    InvalidArgument { module: &'static str, msg: String },

    #[error("sdp: iteration limit reached after {0} iterations")]
    IterationLimit(usize),

    #[error("sdp: {0}")]
    Solver(String),

    #[error("circuits: observable {0} is not in the mapping registry")]
    Unregistered(String),
}

impl Error {
    pub(crate) fn arg(module: &'static str, msg: impl Into<String>) -> Self {
        Error::InvalidArgument {
            module,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
