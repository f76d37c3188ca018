use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parameter g = {g} outside [{lo}, {hi}]")]
    ParameterRange { g: f64, lo: f64, hi: f64 },
    #[error("size cap exceeded: {what} needs {needed} entries, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },
    #[error("operator references edge {0} outside the patch")]
    EdgeOutsidePatch(usize),
    #[error("symmetry check {0} is incompatible with this tensor")]
    IncompatibleSymmetry(String),
    #[error("tensor is not normalized (max row deviation {0:e})")]
    NotNormalized(f64),
    #[error("iterative eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("insufficient significant points for a fit: {0}")]
    InsufficientData(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) | Error::Json(_) => 2,
            Error::CapExceeded { .. } => 3,
            Error::NotConverged { .. } => 4,
            Error::Io(_) => 6,
            Error::InsufficientData(_) => 7,
            _ => 1,
        }
    }
}
