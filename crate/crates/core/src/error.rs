use thiserror::Error;

/// Errors raised by the algebra engine.
///
/// The variants are grouped by how a caller should react: `Usage` and
/// `Arithmetic` are caller mistakes, `Dimension` and `Geometry` report that a
/// mathematical hypothesis failed for the given input, and `Resource` means a
/// configured ceiling was hit. `SelfCheck` signals a bug: a result that a
/// theorem rules out.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("dimension error: {message}")]
    Dimension { message: String, witness: Option<String> },

    #[error("geometry error: {message}")]
    Geometry { message: String, witness: Option<String> },

    #[error("resource limit: {0}")]
    Resource(String),

    /// A computed result contradicted a proven identity or inequality.
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn not_finite_length(variable: &str) -> Self {
        Error::Dimension {
            message: format!(
                "quotient does not have finite length: no pure power of {variable} in the lead-term ideal"
            ),
            witness: Some(variable.to_string()),
        }
    }

    /// The witness carried by hypothesis failures, if any.
    pub fn witness(&self) -> Option<&str> {
        match self {
            Error::Dimension { witness, .. } | Error::Geometry { witness, .. } => witness.as_deref(),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
