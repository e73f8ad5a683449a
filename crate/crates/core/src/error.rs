use thiserror::Error;

/// Errors raised by instance operations, the construction layer and the diagram front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("trace series did not converge after {iterations} iterations (residual mass {residual:e})")]
    Divergence { iterations: usize, residual: f64 },

    #[error("singular feedback system: (I - F_UU) is not invertible")]
    Singular,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unbound name `{0}`")]
    Unbound(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
