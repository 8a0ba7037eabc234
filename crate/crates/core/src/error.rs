use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised while ingesting graphs, building models or computing spectra.
///
/// The `Display` form starts with the variant name; the CLI prints it as is.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ParseError line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("DuplicateEdge line {line}: edge {{{u}, {v}}} already listed")]
    DuplicateEdge { line: usize, u: u64, v: u64 },

    #[error("SelfLoopForbidden line {line}")]
    SelfLoopForbidden { line: usize },

    #[error("IsolatedVertex {vertex}: declared vertex has no incident edge")]
    IsolatedVertex { vertex: u64 },

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("InvalidWeights: {0}")]
    InvalidWeights(String),

    #[error("ModelInvariantViolation: {identity} (residual {residual:e})")]
    ModelInvariantViolation { identity: String, residual: f64 },

    #[error("AssumptionViolated: {identity} (residual {residual:e})")]
    AssumptionViolated { identity: String, residual: f64 },

    #[error("DomainError: {0}")]
    Domain(String),

    #[error("OutOfRange: mu = {mu} lies outside [-1, 1]")]
    OutOfRange { mu: f64 },

    #[error("EigenresidualError at lambda = {re:+.12}{im:+.12}i (residual {residual:e})")]
    Eigenresidual { re: f64, im: f64, residual: f64 },

    #[error("NumericalError: {0}")]
    Numerical(String),

    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),

    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),

    #[error("JsonError: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Input problems (bad files, bad weights, bad flags) as opposed to
    /// numerical failures.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Eigenresidual { .. } | Error::Numerical(_) | Error::OutOfRange { .. }
        )
    }
}
