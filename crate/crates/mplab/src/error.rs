use thiserror::Error;

/// Errors surfaced by the numerical routines.
///
/// Degenerate inputs fail loudly instead of propagating NaN or signed
/// infinities into diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A density that should carry positive finite mass does not; on a
    /// truncated grid this usually means the input is still improper there.
    #[error("zero or non-finite mass: {0}")]
    ZeroMass(String),

    #[error("support violation: {0}")]
    SupportViolation(String),

    /// Too much mass falls outside the configured grid; the bounds must widen.
    #[error("truncation: {0}")]
    Truncation(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap the error with the name of the failing stage.
    pub fn in_context(self, context: impl Into<String>) -> Error {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True for failures of the numerics (as opposed to bad configuration).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::ZeroMass(_)
            | Error::SupportViolation(_)
            | Error::Truncation(_)
            | Error::GridMismatch(_)
            | Error::InsufficientData(_) => true,
            Error::Context { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
