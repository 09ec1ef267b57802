use thiserror::Error;

/// Errors surfaced by the library and the `pma` binary.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters or inputs violate a stated side condition.
    #[error("parameter error: {0}")]
    Param(String),

    /// An operation was asked to act outside its domain (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear system that must be invertible was singular.
    #[error("internal error: singular {0}x{0} matrix")]
    Singular(usize),

    /// A decoded value left the legal range, or the decoded count disagrees
    /// with the plaintext count. Signals a corrupted transcript.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// A protocol step was executed with missing inputs.
    #[error("protocol error: {0}")]
    Protocol(String),

    /// Exhaustive enumeration would exceed the configured cap.
    #[error("audit infeasible: {dimension} free field coordinates over GF({modulus}) exceed the cap of {cap} assignments")]
    AuditInfeasible {
        dimension: usize,
        modulus: u64,
        cap: u64,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Param(_) | Error::Domain(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::AuditInfeasible { .. } => 2,
            Error::Singular(_) | Error::Integrity(_) | Error::Protocol(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
