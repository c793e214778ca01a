use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("{module}: {msg}")]
    Domain { module: &'static str, msg: String },

    /// The request is valid but outside what the engine can compute.
    #[error("{module}: unsupported: {msg}")]
    Capability { module: &'static str, msg: String },

    #[error("correlation: Toeplitz solve at k = {k} failed (residual {residual:.3e} above tolerance)")]
    NumericalFailure { k: usize, residual: f64 },

    #[error("verify: unknown suite `{name}` (available: {roster})")]
    UnknownSuite { name: String, roster: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            module,
            msg: msg.into(),
        }
    }

    pub(crate) fn capability(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Capability {
            module,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. } | Error::UnknownSuite { .. } | Error::Json(_) => 1,
            Error::Capability { .. } | Error::NumericalFailure { .. } | Error::Io(_) => 2,
        }
    }
}
