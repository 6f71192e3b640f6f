use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the simulator and the key-rate analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// A covariance matrix violates the uncertainty principle.
    #[error("non-physical covariance matrix: {0}")]
    Physicality(String),
    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Zero-norm or otherwise degenerate input vectors.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// Parameter estimation could not be carried out.
    #[error("estimation error: {0}")]
    Estimation(String),
    /// The caller violated an API contract (length mismatch, bad sizes, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// An error raised while running a named pipeline stage.
    #[error("[{stage}] {source}")]
    Staged { stage: &'static str, source: Box<Error> },
}

impl Error {
    /// The underlying error with any stage tags removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Staged { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Staged { stage, source: Box::new(self) }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
