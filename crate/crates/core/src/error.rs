use thiserror::Error;

pub type Result<T> = std::result::Result<T, EinfibError>;

/// Error taxonomy. `Validation` means the input does not describe a valid
/// setup (bad structure constants, k not a subalgebra, l ⊄ k, indefinite
/// Killing form, ...). `Numerical` means the input was well-formed but a
/// computation failed to meet its tolerance (eigenvalue clustering collapsed,
/// a scalar operator was not scalar, a solver did not converge).
///
/// The CLI maps `Validation` to exit code 2 and `Numerical` to exit code 3.
#[derive(Debug, Error)]
pub enum EinfibError {
    #[error("validation: {0}")]
    Validation(String),
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl EinfibError {
    pub fn validation(msg: impl Into<String>) -> Self {
        EinfibError::Validation(msg.into())
    }
    pub fn numerical(msg: impl Into<String>) -> Self {
        EinfibError::Numerical(msg.into())
    }
}
